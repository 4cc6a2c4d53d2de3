//! Objects and morphisms of Δ and Δⁿ, the active/inert factorization system,
//! cells, and the enumeration kernels everything else is built on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CombinatError, Result};

/// Default cap on the number of morphisms a single enumeration may produce.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Upper bound on how many items an exhaustive enumeration may materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(self, needed: u128, what: &'static str) -> Result<()> {
        if needed > self.0 as u128 {
            Err(CombinatError::BudgetExceeded { what, needed, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

/// The ordinal `[n] = {0,…,n}`; `n = -1` is the empty ordinal of Δ₊.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaObject(i32);

impl DeltaObject {
    pub const EMPTY: DeltaObject = DeltaObject(-1);

    pub fn new(n: usize) -> Self {
        DeltaObject(n as i32)
    }

    /// Accepts `-1` only when `augmented` is set.
    pub fn from_int(n: i64, augmented: bool) -> Result<Self> {
        match n {
            -1 if augmented => Ok(Self::EMPTY),
            -1 => Err(CombinatError::AugmentedRejected),
            n if n < -1 => Err(CombinatError::InvalidObject(n)),
            n => Ok(DeltaObject(n as i32)),
        }
    }

    pub fn dim(self) -> i32 {
        self.0
    }

    /// Number of elements, `n + 1`.
    pub fn card(self) -> usize {
        (self.0 + 1) as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 < 0
    }

    /// The dimension as an index; panics on the empty ordinal.
    pub fn n(self) -> usize {
        assert!(self.0 >= 0, "empty ordinal has no top element");
        self.0 as usize
    }
}

impl fmt::Display for DeltaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// A monotone map `[n] → [m]`, stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaMorphism {
    src: DeltaObject,
    tgt: DeltaObject,
    values: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MorphismClass {
    Inert,
    Active,
    Both,
    Neutral,
}

impl MorphismClass {
    pub fn is_inert(self) -> bool {
        matches!(self, MorphismClass::Inert | MorphismClass::Both)
    }

    pub fn is_active(self) -> bool {
        matches!(self, MorphismClass::Active | MorphismClass::Both)
    }
}

/// `f = inert ∘ active`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub active: DeltaMorphism,
    pub inert: DeltaMorphism,
}

impl DeltaMorphism {
    /// A morphism of plain Δ; the empty ordinal is rejected.
    pub fn new(src: usize, tgt: usize, values: Vec<usize>) -> Result<Self> {
        Self::build(DeltaObject::new(src), DeltaObject::new(tgt), values)
    }

    /// A morphism of Δ₊; only the empty source may be empty, unless both are.
    pub fn new_augmented(src: DeltaObject, tgt: DeltaObject, values: Vec<usize>) -> Result<Self> {
        if tgt.is_empty() && !src.is_empty() {
            return Err(CombinatError::NoMapToEmpty);
        }
        Self::build(src, tgt, values)
    }

    fn build(src: DeltaObject, tgt: DeltaObject, values: Vec<usize>) -> Result<Self> {
        if values.len() != src.card() {
            return Err(CombinatError::LengthMismatch { expected: src.card(), got: values.len() });
        }
        if let Some(w) = values.windows(2).find(|w| w[0] > w[1]) {
            return Err(CombinatError::NotMonotone(w[0], w[1]));
        }
        if let Some(&v) = values.iter().find(|&&v| v as i64 > tgt.dim() as i64) {
            return Err(CombinatError::OutOfRange { value: v, tgt: tgt.dim() });
        }
        Ok(DeltaMorphism { src, tgt, values })
    }

    pub(crate) fn from_parts_unchecked(src: usize, tgt: usize, values: Vec<usize>) -> Self {
        debug_assert_eq!(values.len(), src + 1);
        DeltaMorphism { src: DeltaObject::new(src), tgt: DeltaObject::new(tgt), values }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts_unchecked(n, n, (0..=n).collect())
    }

    /// `ρ_i : [1] → [n]`, `0 ↦ i-1`, `1 ↦ i`, for `1 ≤ i ≤ n`.
    pub fn rho(i: usize, n: usize) -> Self {
        assert!(1 <= i && i <= n, "rho_{i} undefined on [{n}]");
        Self::from_parts_unchecked(1, n, vec![i - 1, i])
    }

    /// The face `d_i : [n-1] → [n]` skipping `i`.
    pub fn face(i: usize, n: usize) -> Self {
        assert!(n >= 1 && i <= n);
        Self::from_parts_unchecked(n - 1, n, (0..=n).filter(|&j| j != i).collect())
    }

    /// The degeneracy `s_i : [n+1] → [n]` repeating `i`.
    pub fn degeneracy(i: usize, n: usize) -> Self {
        assert!(i <= n);
        let values = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
        Self::from_parts_unchecked(n + 1, n, values)
    }

    /// The map `[0] → [n]` picking `j`.
    pub fn point(j: usize, n: usize) -> Self {
        assert!(j <= n);
        Self::from_parts_unchecked(0, n, vec![j])
    }

    /// The interval inclusion `[len] → [n]` starting at `start`.
    pub fn interval(start: usize, len: usize, n: usize) -> Self {
        assert!(start + len <= n);
        Self::from_parts_unchecked(len, n, (start..=start + len).collect())
    }

    pub fn src(&self) -> DeltaObject {
        self.src
    }

    pub fn tgt(&self) -> DeltaObject {
        self.tgt
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        if self.tgt.is_empty() {
            return true;
        }
        if self.values.first() != Some(&0) || self.values.last() != Some(&self.tgt.n()) {
            return false;
        }
        self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `f(i) = f(0) + i` for all `i`.
    pub fn is_inert(&self) -> bool {
        match self.values.first() {
            None => true,
            Some(&v0) => self.values.iter().enumerate().all(|(i, &v)| v == v0 + i),
        }
    }

    /// `f(0) = 0` and `f(n) = m`.
    pub fn is_active(&self) -> bool {
        match (self.values.first(), self.values.last()) {
            (Some(&a), Some(&b)) => a == 0 && b as i32 == self.tgt.dim(),
            // the empty map is active only onto the empty ordinal
            _ => self.tgt.is_empty(),
        }
    }

    pub fn classify(&self) -> MorphismClass {
        match (self.is_inert(), self.is_active()) {
            (true, true) => MorphismClass::Both,
            (true, false) => MorphismClass::Inert,
            (false, true) => MorphismClass::Active,
            (false, false) => MorphismClass::Neutral,
        }
    }

    /// `g ∘ self`, defined when `self.tgt() == g.src()`.
    pub fn then(&self, g: &DeltaMorphism) -> Result<DeltaMorphism> {
        compose(self, g)
    }

    /// The unique factorization `self = ι ∘ α` with `α` active and `ι` inert.
    pub fn factorize(&self) -> Factorization {
        factorize(self)
    }
}

impl fmt::Display for DeltaMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}(", self.src, self.tgt)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Returns `g ∘ f`.
pub fn compose(f: &DeltaMorphism, g: &DeltaMorphism) -> Result<DeltaMorphism> {
    if f.tgt != g.src {
        return Err(CombinatError::NotComposable { left: f.tgt.dim(), right: g.src.dim() });
    }
    let values = f.values.iter().map(|&i| g.values[i]).collect();
    Ok(DeltaMorphism { src: f.src, tgt: g.tgt, values })
}

pub fn factorize(f: &DeltaMorphism) -> Factorization {
    let Some(&base) = f.values.first() else {
        // empty source: the active part is the identity of the empty ordinal
        return Factorization {
            active: f.clone(),
            inert: DeltaMorphism { src: f.src, tgt: f.tgt, values: Vec::new() },
        };
    };
    let k = f.values[f.values.len() - 1] - base;
    let active = DeltaMorphism::from_parts_unchecked(
        f.src.n(),
        k,
        f.values.iter().map(|&v| v - base).collect(),
    );
    let inert = DeltaMorphism::interval(base, k, f.tgt.n());
    Factorization { active, inert }
}

/// Every map `[a] → [b]` with `a, b ≤ max` is `ι ∘ α` for exactly one
/// active `α` and inert `ι`, found by composing all such pairs, and that
/// pair is the one [`factorize`] returns.
pub fn check_factorization(max: usize) -> crate::Tally {
    let mut t = crate::Tally::new();
    for a in 0..=max {
        for b in 0..=max {
            let mut hits: std::collections::HashMap<Vec<usize>, Vec<Factorization>> = std::collections::HashMap::new();
            for k in 0..=b {
                let actives = enumerate_active(a, k, Budget::default()).expect("small");
                for start in 0..=b - k {
                    let inert = DeltaMorphism::interval(start, k, b);
                    for act in &actives {
                        let f = compose(act, &inert).expect("composable");
                        hits.entry(f.values).or_default().push(Factorization { active: act.clone(), inert: inert.clone() });
                    }
                }
            }
            for f in enumerate_morphisms(a, b, Budget::default()).expect("small") {
                let found = hits.get(&f.values).map_or(&[][..], Vec::as_slice);
                let ok = found.len() == 1 && found[0] == factorize(&f);
                t.record(ok, || format!("{f}: {} factorizations", found.len()));
            }
        }
    }
    t
}

/// Composites of inert maps are inert and of active maps active, for all
/// composable pairs through ordinals `≤ max`; `Both` only on identities.
pub fn check_classification(max: usize) -> crate::Tally {
    let mut t = crate::Tally::new();
    let homs: Vec<Vec<Vec<DeltaMorphism>>> = (0..=max)
        .map(|a| (0..=max).map(|b| enumerate_morphisms(a, b, Budget::default()).expect("small")).collect())
        .collect();
    for row in &homs {
        for f in row.iter().flatten() {
            t.record((f.classify() == MorphismClass::Both) == f.is_identity(), || format!("{f}: Both but not an identity"));
        }
    }
    for a in 0..=max {
        for (b, fs) in homs[a].iter().enumerate() {
            for gs in &homs[b] {
                for f in fs {
                    for g in gs {
                        let gf = compose(f, g).expect("composable");
                        let ok = (!(f.is_inert() && g.is_inert()) || gf.is_inert())
                            && (!(f.is_active() && g.is_active()) || gf.is_active());
                        t.record(ok, || format!("{g} ∘ {f} = {gf} breaks closure"));
                    }
                }
            }
        }
    }
    t
}

/// Classification on Δ² agrees with the componentwise conjunction, for
/// components `≤ max`.
pub fn check_n_classification(max: usize) -> crate::Tally {
    let mut t = crate::Tally::new();
    let objs: Vec<DeltaNObject> = (0..=max).flat_map(|a| (0..=max).map(move |b| DeltaNObject(vec![a, b]))).collect();
    for s in &objs {
        for u in &objs {
            for f in enumerate_n_morphisms(s, u, Budget::default()).expect("small") {
                let expected = match (f.0[0].classify(), f.0[1].classify()) {
                    (MorphismClass::Both, c) | (c, MorphismClass::Both) => c,
                    (x, y) if x == y => x,
                    _ => MorphismClass::Neutral,
                };
                t.record(f.classify() == expected, || format!("{f}: {:?}, components give {expected:?}", f.classify()));
            }
        }
    }
    t
}

/// Listed hom-set sizes against a multiset recursion, for `a + b ≤ max_sum`.
pub fn check_enumeration_count(max_sum: usize) -> crate::Tally {
    fn multisets(k: usize, from: usize) -> u128 {
        match (k, from) {
            (0, _) => 1,
            (_, 0) => 0,
            _ => multisets(k - 1, from) + multisets(k, from - 1),
        }
    }
    let mut t = crate::Tally::new();
    for a in 0..=max_sum {
        for b in 0..=max_sum - a {
            let listed = enumerate_morphisms(a, b, Budget::default()).expect("small").len() as u128;
            let want = multisets(a + 1, b + 1);
            t.record(listed == want && morphism_count(a, b) == want, || format!("[{a}] → [{b}]: listed {listed}, expected {want}"));
        }
    }
    t
}

/// `C(n, k)` in `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of monotone maps `[a] → [b]`: `C(a+b+1, a+1)`.
pub fn morphism_count(a: usize, b: usize) -> u128 {
    binomial((a + b + 1) as u64, (a + 1) as u64)
}

/// All monotone maps `src → tgt` in lexicographic order.
pub fn enumerate_morphisms(src: usize, tgt: usize, budget: Budget) -> Result<Vec<DeltaMorphism>> {
    budget.check(morphism_count(src, tgt), "monotone maps")?;
    let mut out = Vec::with_capacity(morphism_count(src, tgt) as usize);
    let mut cur = vec![0usize; src + 1];
    loop {
        out.push(DeltaMorphism::from_parts_unchecked(src, tgt, cur.clone()));
        // advance to the lexicographic successor among nondecreasing sequences
        let Some(pos) = (0..=src).rev().find(|&p| cur[p] < tgt) else {
            break;
        };
        let v = cur[pos] + 1;
        cur[pos..].iter_mut().for_each(|c| *c = v);
    }
    Ok(out)
}

/// Active maps `[src] → [tgt]` only.
pub fn enumerate_active(src: usize, tgt: usize, budget: Budget) -> Result<Vec<DeltaMorphism>> {
    Ok(enumerate_morphisms(src, tgt, budget)?.into_iter().filter(|f| f.is_active()).collect())
}

/// An object `([i₁],…,[i_n])` of Δⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaNObject(pub Vec<usize>);

impl DeltaNObject {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for DeltaNObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{d}]")?;
        }
        write!(f, ")")
    }
}

/// A morphism of Δⁿ: one Δ-map per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaNMorphism(pub Vec<DeltaMorphism>);

impl DeltaNMorphism {
    pub fn new(components: Vec<DeltaMorphism>) -> Result<Self> {
        if components.iter().any(|c| c.src.is_empty() || c.tgt.is_empty()) {
            return Err(CombinatError::AugmentedRejected);
        }
        Ok(DeltaNMorphism(components))
    }

    pub fn single(f: DeltaMorphism) -> Self {
        DeltaNMorphism(vec![f])
    }

    pub fn identity(obj: &DeltaNObject) -> Self {
        DeltaNMorphism(obj.0.iter().map(|&n| DeltaMorphism::identity(n)).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[DeltaMorphism] {
        &self.0
    }

    pub fn src(&self) -> DeltaNObject {
        DeltaNObject(self.0.iter().map(|c| c.src.n()).collect())
    }

    pub fn tgt(&self) -> DeltaNObject {
        DeltaNObject(self.0.iter().map(|c| c.tgt.n()).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(DeltaMorphism::is_identity)
    }

    pub fn is_inert(&self) -> bool {
        self.0.iter().all(DeltaMorphism::is_inert)
    }

    pub fn is_active(&self) -> bool {
        self.0.iter().all(DeltaMorphism::is_active)
    }

    /// Conjunction of the componentwise conditions.
    pub fn classify(&self) -> MorphismClass {
        match (self.is_inert(), self.is_active()) {
            (true, true) => MorphismClass::Both,
            (true, false) => MorphismClass::Inert,
            (false, true) => MorphismClass::Active,
            (false, false) => MorphismClass::Neutral,
        }
    }

    /// `g ∘ self`, componentwise.
    pub fn then(&self, g: &DeltaNMorphism) -> Result<DeltaNMorphism> {
        if self.arity() != g.arity() {
            return Err(CombinatError::ArityMismatch(self.arity(), g.arity()));
        }
        self.0.iter().zip(&g.0).map(|(f, g)| compose(f, g)).collect::<Result<Vec<_>>>().map(DeltaNMorphism)
    }

    pub fn factorize(&self) -> (DeltaNMorphism, DeltaNMorphism) {
        let (a, i): (Vec<_>, Vec<_>) = self.0.iter().map(|f| {
            let fac = factorize(f);
            (fac.active, fac.inert)
        }).unzip();
        (DeltaNMorphism(a), DeltaNMorphism(i))
    }
}

impl fmt::Display for DeltaNMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " × ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// All morphisms `src → tgt` of Δⁿ, lexicographic in the components.
pub fn enumerate_n_morphisms(src: &DeltaNObject, tgt: &DeltaNObject, budget: Budget) -> Result<Vec<DeltaNMorphism>> {
    if src.arity() != tgt.arity() {
        return Err(CombinatError::ArityMismatch(src.arity(), tgt.arity()));
    }
    let total: u128 = src.0.iter().zip(&tgt.0).map(|(&a, &b)| morphism_count(a, b)).product();
    budget.check(total, "Δⁿ morphisms")?;
    let factors = src.0.iter().zip(&tgt.0)
        .map(|(&a, &b)| enumerate_morphisms(a, b, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(cartesian(&factors).into_iter().map(DeltaNMorphism).collect())
}

/// Cartesian product of lists, last coordinate varying fastest.
pub fn cartesian<T: Clone>(factors: &[Vec<T>]) -> Vec<Vec<T>> {
    factors.iter().fold(vec![Vec::new()], |acc, fac| {
        acc.iter()
            .flat_map(|prefix| fac.iter().map(move |x| {
                let mut p = prefix.clone();
                p.push(x.clone());
                p
            }))
            .collect()
    })
}

/// The cell `C_S` of Δⁿ: coordinate `j` is `[1]` when `j ∈ S`, else `[0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub arity: usize,
    /// membership flags, 0-based coordinates
    pub members: Vec<bool>,
}

impl Cell {
    pub fn new(arity: usize, subset: &[usize]) -> Self {
        let mut members = vec![false; arity];
        for &j in subset {
            members[j] = true;
        }
        Cell { arity, members }
    }

    pub fn full(arity: usize) -> Self {
        Cell { arity, members: vec![true; arity] }
    }

    pub fn object(&self) -> DeltaNObject {
        DeltaNObject(self.members.iter().map(|&m| m as usize).collect())
    }

    /// All `2ⁿ` cells, ordered by the bitmask of `S`.
    pub fn all(arity: usize) -> Vec<Cell> {
        (0..1u64 << arity)
            .map(|mask| Cell { arity, members: (0..arity).map(|j| mask >> j & 1 == 1).collect() })
            .collect()
    }
}

/// The levelwise inert maps `C_n → I`, i.e. tuples `(ρ_{i₁},…,ρ_{i_n})`.
pub fn inert_cell_maps(target: &DeltaNObject) -> Vec<DeltaNMorphism> {
    let factors: Vec<Vec<DeltaMorphism>> = target.0.iter()
        .map(|&n| (1..=n).map(|i| DeltaMorphism::rho(i, n)).collect())
        .collect();
    cartesian(&factors).into_iter().map(DeltaNMorphism).collect()
}

/// Every inert map from every cell into `I`: the objects of Cellⁿ/I.
pub fn cell_maps_over(target: &DeltaNObject) -> Vec<(Cell, DeltaNMorphism)> {
    Cell::all(target.arity())
        .into_iter()
        .flat_map(|cell| {
            let factors: Vec<Vec<DeltaMorphism>> = cell.members.iter().zip(&target.0)
                .map(|(&m, &n)| if m {
                    (1..=n).map(|i| DeltaMorphism::rho(i, n)).collect()
                } else {
                    (0..=n).map(|j| DeltaMorphism::point(j, n)).collect()
                })
                .collect();
            cartesian(&factors).into_iter().map(move |c| (cell.clone(), DeltaNMorphism(c)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(src: usize, tgt: usize, v: &[usize]) -> DeltaMorphism {
        DeltaMorphism::new(src, tgt, v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id2 = DeltaMorphism::identity(2);
        assert_eq!(compose(&id2, &id2).unwrap(), id2);
        let d1 = m(1, 2, &[0, 2]);
        let s0 = m(2, 1, &[0, 0, 1]);
        assert_eq!(compose(&d1, &s0).unwrap(), DeltaMorphism::identity(1));
        let rho2 = m(1, 3, &[1, 2]);
        let sigma = m(3, 2, &[0, 1, 1, 2]);
        assert_eq!(compose(&rho2, &sigma).unwrap(), m(1, 2, &[1, 1]));
        assert!(matches!(compose(&rho2, &d1), Err(CombinatError::NotComposable { .. })));
    }

    #[test]
    fn classify_examples() {
        for n in 1..5 {
            for i in 1..=n {
                assert!(DeltaMorphism::rho(i, n).classify().is_inert());
            }
        }
        assert_eq!(m(1, 2, &[0, 2]).classify(), MorphismClass::Active);
        assert_eq!(m(1, 2, &[0, 1]).classify(), MorphismClass::Inert);
        assert_eq!(DeltaMorphism::identity(3).classify(), MorphismClass::Both);
        assert_eq!(m(2, 3, &[1, 1, 3]).classify(), MorphismClass::Neutral);
    }

    #[test]
    fn factorization_unique_up_to_four() {
        let t = check_factorization(4);
        assert!(t.ok(), "{:?}", t.witnesses);
        // Σ_{a,b ≤ 4} C(a+b+1, a+1)
        let expected: u64 = (0..=4u64).flat_map(|a| (0..=4u64).map(move |b| (a, b))).map(|(a, b)| binom(a + b + 1, a + 1)).sum();
        assert_eq!(t.checked, expected);
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn sweeps_pass() {
        for t in [check_classification(3), check_n_classification(2), check_enumeration_count(8)] {
            assert!(t.ok() && t.checked > 0, "{:?}", t.witnesses);
        }
    }

    #[test]
    fn factorize_examples() {
        let f = m(1, 3, &[1, 2]);
        let fac = factorize(&f);
        assert_eq!(fac.active, DeltaMorphism::identity(1));
        assert_eq!(fac.inert, f);

        let f = m(2, 2, &[0, 0, 2]);
        let fac = factorize(&f);
        assert_eq!(fac.active, f);
        assert_eq!(fac.inert, DeltaMorphism::identity(2));

        let fac = factorize(&m(1, 3, &[1, 3]));
        assert_eq!(fac.active, m(1, 2, &[0, 2]));
        assert_eq!(fac.inert, m(2, 3, &[1, 2, 3]));
    }

    #[test]
    fn enumeration_examples() {
        let b = Budget::default();
        assert_eq!(enumerate_morphisms(1, 1, b).unwrap().len(), 3);
        assert_eq!(enumerate_morphisms(2, 1, b).unwrap().len(), 4);
        for n in 0..6 {
            assert_eq!(enumerate_morphisms(0, n, b).unwrap().len(), n + 1);
        }
        let all = enumerate_morphisms(2, 2, b).unwrap();
        assert!(all.windows(2).all(|w| w[0].values() < w[1].values()));
        assert!(matches!(
            enumerate_morphisms(6, 6, Budget(10)),
            Err(CombinatError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_count_formula() {
        // independent count: number of multisets of size a+1 from b+1 values
        fn multisets(k: usize, from: usize) -> u128 {
            if k == 0 {
                return 1;
            }
            if from == 0 {
                return 0;
            }
            multisets(k - 1, from) + multisets(k, from - 1)
        }
        for a in 0..=10usize {
            for b in 0..=10 - a {
                let listed = enumerate_morphisms(a, b, Budget::default()).unwrap().len() as u128;
                assert_eq!(listed, morphism_count(a, b));
                assert_eq!(listed, multisets(a + 1, b + 1));
            }
        }
    }

    #[test]
    fn augmented_rejected_by_default() {
        assert!(matches!(DeltaObject::from_int(-1, false), Err(CombinatError::AugmentedRejected)));
        let e = DeltaObject::from_int(-1, true).unwrap();
        let f = DeltaMorphism::new_augmented(e, DeltaObject::new(2), vec![]).unwrap();
        assert!(!f.is_active());
        assert!(f.is_inert());
        assert!(DeltaMorphism::new_augmented(DeltaObject::new(0), e, vec![0]).is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(matches!(DeltaMorphism::new(1, 2, vec![2, 1]), Err(CombinatError::NotMonotone(2, 1))));
        assert!(matches!(DeltaMorphism::new(1, 2, vec![0, 3]), Err(CombinatError::OutOfRange { .. })));
        assert!(matches!(DeltaMorphism::new(1, 2, vec![0]), Err(CombinatError::LengthMismatch { .. })));
    }

    #[test]
    fn json_form() {
        let f = m(1, 3, &[1, 3]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"src":1,"tgt":3,"values":[1,3]}"#);
        let back: DeltaMorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let pair = DeltaNMorphism(vec![f.clone(), DeltaMorphism::identity(0)]);
        let s = serde_json::to_string(&pair).unwrap();
        assert!(s.starts_with('['));
    }

    #[test]
    fn cells_and_inert_maps() {
        let two = inert_cell_maps(&DeltaNObject(vec![2]));
        assert_eq!(two, vec![
            DeltaNMorphism::single(DeltaMorphism::rho(1, 2)),
            DeltaNMorphism::single(DeltaMorphism::rho(2, 2)),
        ]);
        let sq = inert_cell_maps(&DeltaNObject(vec![1, 1]));
        assert_eq!(sq, vec![DeltaNMorphism::identity(&DeltaNObject(vec![1, 1]))]);
        assert_eq!(inert_cell_maps(&DeltaNObject(vec![2, 3])).len(), 6);
        assert_eq!(inert_cell_maps(&DeltaNObject(vec![])).len(), 1);

        let over1 = cell_maps_over(&DeltaNObject(vec![1]));
        assert_eq!(over1.len(), 3);
        assert_eq!(over1.iter().filter(|(c, _)| c.members == [true]).count(), 1);
        assert_eq!(cell_maps_over(&DeltaNObject(vec![0, 0])).len(), 1);
        let over2 = cell_maps_over(&DeltaNObject(vec![2]));
        assert_eq!(over2.iter().filter(|(c, _)| c.members == [true]).count(), 2);
        assert_eq!(over2.iter().filter(|(c, _)| c.members == [false]).count(), 3);
        assert!(over2.iter().all(|(c, f)| f.is_inert() && f.src() == c.object()));
    }

    #[test]
    fn cell_object_shape() {
        let c = Cell::new(3, &[0, 2]);
        assert_eq!(c.object(), DeltaNObject(vec![1, 0, 1]));
        assert_eq!(Cell::all(3).len(), 8);
    }

    #[test]
    fn classification_of_composites() {
        let b = Budget::default();
        for a in 0..=4 {
            for bb in 0..=4 {
                for c in 0..=4 {
                    for f in enumerate_morphisms(a, bb, b).unwrap() {
                        for g in enumerate_morphisms(bb, c, b).unwrap() {
                            let gf = compose(&f, &g).unwrap();
                            if f.is_inert() && g.is_inert() {
                                assert!(gf.is_inert());
                            }
                            if f.is_active() && g.is_active() {
                                assert!(gf.is_active());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn both_means_identity() {
        for a in 0..=5 {
            for bb in 0..=5 {
                for f in enumerate_morphisms(a, bb, Budget::default()).unwrap() {
                    assert_eq!(f.classify() == MorphismClass::Both, f.is_identity());
                }
            }
        }
    }

    #[test]
    fn n_classification_is_componentwise() {
        let a = DeltaNMorphism(vec![m(1, 2, &[0, 2]), DeltaMorphism::identity(1)]);
        assert_eq!(a.classify(), MorphismClass::Active);
        let mixed = DeltaNMorphism(vec![m(1, 2, &[0, 2]), m(0, 1, &[1])]);
        assert_eq!(mixed.classify(), MorphismClass::Neutral);
        let inert = DeltaNMorphism(vec![m(1, 2, &[1, 2]), m(0, 1, &[1])]);
        assert_eq!(inert.classify(), MorphismClass::Inert);
    }

    fn arb_morphism() -> impl Strategy<Value = DeltaMorphism> {
        (0usize..7, 0usize..7).prop_flat_map(|(a, b)| {
            proptest::collection::vec(0..=b, a + 1).prop_map(move |mut v| {
                v.sort_unstable();
                DeltaMorphism::new(a, b, v).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn factorization_recomposes(f in arb_morphism()) {
            let fac = factorize(&f);
            prop_assert!(fac.active.is_active());
            prop_assert!(fac.inert.is_inert());
            prop_assert_eq!(compose(&fac.active, &fac.inert).unwrap(), f);
        }

        #[test]
        fn composition_is_associative(f in arb_morphism(), seed in any::<u64>()) {
            // build g, h composable with f from the seed
            let b = f.tgt().n();
            let c = (seed % 5) as usize;
            let d = (seed / 5 % 5) as usize;
            let gs = enumerate_morphisms(b, c, Budget::default()).unwrap();
            let hs = enumerate_morphisms(c, d, Budget::default()).unwrap();
            let g = &gs[(seed as usize / 25) % gs.len()];
            let h = &hs[(seed as usize / 7) % hs.len()];
            let left = compose(&compose(&f, g).unwrap(), h).unwrap();
            let right = compose(&f, &compose(g, h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
