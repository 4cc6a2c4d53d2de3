//! Pointed finite sets ⟨n⟩ = {0,…,n}, the comparison u¹ from Δ, the
//! product-indexing map μ and the iterated uⁿ.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CombinatError, Result};
use crate::simplex::{compose, enumerate_morphisms, Budget, DeltaMorphism, DeltaNMorphism, DeltaNObject, MorphismClass};
use crate::tally::Tally;

/// A basepoint-preserving map `⟨src⟩ → ⟨tgt⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GammaJson", into = "GammaJson")]
pub struct GammaMorphism {
    src: usize,
    tgt: usize,
    values: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GammaJson {
    kind: String,
    src: usize,
    tgt: usize,
    values: Vec<usize>,
}

impl From<GammaMorphism> for GammaJson {
    fn from(g: GammaMorphism) -> Self {
        GammaJson { kind: "gamma".into(), src: g.src, tgt: g.tgt, values: g.values }
    }
}

impl TryFrom<GammaJson> for GammaMorphism {
    type Error = CombinatError;

    fn try_from(j: GammaJson) -> Result<Self> {
        if j.kind != "gamma" {
            return Err(CombinatError::InvalidSequence(j.values));
        }
        GammaMorphism::new(j.src, j.tgt, j.values)
    }
}

impl GammaMorphism {
    pub fn new(src: usize, tgt: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != src + 1 {
            return Err(CombinatError::LengthMismatch { expected: src + 1, got: values.len() });
        }
        if values[0] != 0 {
            return Err(CombinatError::NotPointed);
        }
        if let Some(&v) = values.iter().find(|&&v| v > tgt) {
            return Err(CombinatError::OutOfRange { value: v, tgt: tgt as i32 });
        }
        Ok(GammaMorphism { src, tgt, values })
    }

    pub fn identity(n: usize) -> Self {
        GammaMorphism { src: n, tgt: n, values: (0..=n).collect() }
    }

    /// `ρ_i : ⟨n⟩ → ⟨1⟩`, sending `i` to 1 and everything else to 0.
    pub fn rho(i: usize, n: usize) -> Self {
        assert!(1 <= i && i <= n);
        GammaMorphism { src: n, tgt: 1, values: (0..=n).map(|x| (x == i) as usize).collect() }
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &GammaMorphism) -> Result<GammaMorphism> {
        if self.tgt != g.src {
            return Err(CombinatError::NotComposable { left: self.tgt as i32, right: g.src as i32 });
        }
        Ok(GammaMorphism { src: self.src, tgt: g.tgt, values: self.values.iter().map(|&x| g.values[x]).collect() })
    }

    fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.tgt + 1];
        for &v in &self.values {
            sizes[v] += 1;
        }
        sizes
    }

    pub fn is_inert(&self) -> bool {
        self.fiber_sizes()[1..].iter().all(|&c| c == 1)
    }

    pub fn is_active(&self) -> bool {
        self.values[1..].iter().all(|&v| v != 0)
    }

    pub fn is_bijection(&self) -> bool {
        self.src == self.tgt && self.fiber_sizes().iter().all(|&c| c == 1)
    }
}

impl fmt::Display for GammaMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩→⟨{}⟩{:?}", self.src, self.tgt, self.values)
    }
}

pub fn gamma_classify(f: &GammaMorphism) -> MorphismClass {
    match (f.is_inert(), f.is_active()) {
        (true, true) => MorphismClass::Both,
        (true, false) => MorphismClass::Inert,
        (false, true) => MorphismClass::Active,
        (false, false) => MorphismClass::Neutral,
    }
}

/// `u¹(φ) : ⟨m⟩ → ⟨n⟩` for `φ : [n] → [m]`, sending `i` to the `j` with
/// `φ(j-1) < i ≤ φ(j)`, or to 0 if there is none.
pub fn u1(phi: &DeltaMorphism) -> GammaMorphism {
    let n = phi.src().n();
    let m = phi.tgt().n();
    let v = phi.values();
    let mut values = vec![0; m + 1];
    for j in 1..=n {
        for slot in &mut values[v[j - 1] + 1..=v[j]] {
            *slot = j;
        }
    }
    GammaMorphism { src: m, tgt: n, values }
}

/// The pair `(a, b)`, `1 ≤ a`, `1 ≤ b ≤ n`, as the point `an + b - n` of ⟨mn⟩.
pub fn encode(a: usize, b: usize, n: usize) -> usize {
    debug_assert!(a >= 1 && (1..=n).contains(&b));
    (a - 1) * n + b
}

/// Inverse of [`encode`] on nonzero points.
pub fn decode(x: usize, n: usize) -> (usize, usize) {
    debug_assert!(x >= 1 && n >= 1);
    ((x - 1) / n + 1, (x - 1) % n + 1)
}

/// `μ(f, g) : ⟨mn⟩ → ⟨m′n′⟩`.
pub fn mu(f: &GammaMorphism, g: &GammaMorphism) -> GammaMorphism {
    let (m, n) = (f.src, g.src);
    let (mp, np) = (f.tgt, g.tgt);
    let mut values = vec![0; m * n + 1];
    for a in 1..=m {
        for b in 1..=n {
            let (fa, gb) = (f.values[a], g.values[b]);
            values[encode(a, b, n)] = if fa == 0 || gb == 0 { 0 } else { encode(fa, gb, np) };
        }
    }
    GammaMorphism { src: m * n, tgt: mp * np, values }
}

/// `uⁿ(Φ) = μ ∘ (u¹ × uⁿ⁻¹)`; arity 0 gives `id_⟨1⟩`.
pub fn un(phi: &DeltaNMorphism) -> GammaMorphism {
    phi.components()
        .iter()
        .rev()
        .fold(GammaMorphism::identity(1), |rest, c| mu(&u1(c), &rest))
}

/// The object `⟨i₁⋯i_n⟩`.
pub fn un_object(obj: &DeltaNObject) -> usize {
    obj.0.iter().product()
}

/// All pointed maps `⟨m⟩ → ⟨n⟩`.
pub fn enumerate_gamma(m: usize, n: usize, budget: Budget) -> Result<Vec<GammaMorphism>> {
    budget.check((n as u128 + 1).pow(m as u32), "pointed maps")?;
    let mut out = Vec::new();
    let mut cur = vec![0usize; m + 1];
    loop {
        out.push(GammaMorphism { src: m, tgt: n, values: cur.clone() });
        let Some(pos) = (1..=m).rev().find(|&p| cur[p] < n) else {
            break;
        };
        cur[pos] += 1;
        cur[pos + 1..].iter_mut().for_each(|c| *c = 0);
    }
    Ok(out)
}

/// Δ morphisms with both ends ≤ `max`, indexed, with their composition table.
struct DeltaIndex {
    maps: Vec<DeltaMorphism>,
    /// composable pairs `(f, g, g∘f)` by index
    pairs: Vec<(usize, usize, usize)>,
}

impl DeltaIndex {
    fn new(max: usize) -> Self {
        let maps: Vec<DeltaMorphism> = (0..=max)
            .flat_map(|a| (0..=max).flat_map(move |b| enumerate_morphisms(a, b, Budget::default()).unwrap()))
            .collect();
        let index: HashMap<&DeltaMorphism, usize> = maps.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut pairs = Vec::new();
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate() {
                if f.tgt() == g.src() {
                    pairs.push((i, j, index[&compose(f, g).unwrap()]));
                }
            }
        }
        DeltaIndex { maps, pairs }
    }
}

/// `u¹` sends identities to identities and `g∘f` to `u¹(f)∘u¹(g)`, for every
/// composable pair with ordinals ≤ `max`.
pub fn check_u1_functorial(max: usize) -> Tally {
    let idx = DeltaIndex::new(max);
    let images: Vec<GammaMorphism> = idx.maps.iter().map(u1).collect();
    let mut t = Tally::new();
    for n in 0..=max {
        let ok = u1(&DeltaMorphism::identity(n)) == GammaMorphism::identity(n);
        t.record(ok, || format!("u1(id_[{n}]) is not the identity"));
    }
    for &(f, g, gf) in &idx.pairs {
        let ok = images[g].then(&images[f]).ok().as_ref() == Some(&images[gf]);
        t.record(ok, || format!("u1 not functorial on {} then {}", idx.maps[f], idx.maps[g]));
    }
    t
}

/// Functoriality of `uⁿ` over every composable pair in Δⁿ with all ordinals ≤ `max`.
pub fn check_un_functorial(arity: usize, max: usize) -> Tally {
    let idx = DeltaIndex::new(max);
    let k = idx.maps.len();
    // un of every Δⁿ morphism, addressed by its mixed-radix component indices
    let tuples = k.pow(arity as u32);
    let images: Vec<Vec<usize>> = (0..tuples)
        .map(|code| un(&decode_tuple(code, k, arity, &idx.maps)).values)
        .collect();
    let mut t = Tally::new();
    let p = idx.pairs.len();
    let mut counters = vec![0usize; arity];
    loop {
        let (mut cf, mut cg, mut cgf) = (0, 0, 0);
        for &c in &counters {
            let (f, g, gf) = idx.pairs[c];
            cf = cf * k + f;
            cg = cg * k + g;
            cgf = cgf * k + gf;
        }
        let (uf, ug, ugf) = (&images[cf], &images[cg], &images[cgf]);
        let ok = ug.len() == ugf.len() && ug.iter().zip(ugf).all(|(&x, &y)| uf[x] == y);
        t.record(ok, || {
            let f = decode_tuple(cf, k, arity, &idx.maps);
            let g = decode_tuple(cg, k, arity, &idx.maps);
            format!("un not functorial on {f} then {g}")
        });
        let Some(pos) = (0..arity).rev().find(|&i| counters[i] + 1 < p) else {
            break;
        };
        counters[pos] += 1;
        counters[pos + 1..].iter_mut().for_each(|c| *c = 0);
    }
    for (code, image) in images.iter().enumerate() {
        let phi = decode_tuple(code, k, arity, &idx.maps);
        if phi.is_identity() {
            let n = un_object(&phi.src());
            t.record(*image == GammaMorphism::identity(n).values, || format!("un({phi}) is not the identity"));
        }
    }
    t
}

fn decode_tuple(mut code: usize, k: usize, arity: usize, maps: &[DeltaMorphism]) -> DeltaNMorphism {
    let mut comps = vec![maps[0].clone(); arity];
    for slot in comps.iter_mut().rev() {
        *slot = maps[code % k].clone();
        code /= k;
    }
    DeltaNMorphism(comps)
}

/// Inert Δ maps go to inert Γ maps and active to active, ordinals ≤ `max`.
pub fn check_u1_preserves_classes(max: usize) -> Tally {
    let mut t = Tally::new();
    for a in 0..=max {
        for b in 0..=max {
            for phi in enumerate_morphisms(a, b, Budget::default()).unwrap() {
                let img = u1(&phi);
                if phi.is_inert() {
                    t.record(img.is_inert(), || format!("u1({phi}) = {img} not inert"));
                }
                if phi.is_active() {
                    t.record(img.is_active(), || format!("u1({phi}) = {img} not active"));
                }
            }
        }
    }
    t
}

/// `μ(inert, inert)` is inert and `μ(active, active)` is active, all Γ maps ≤ `max`.
pub fn check_mu_preserves_classes(max: usize) -> Tally {
    let all: Vec<GammaMorphism> = (0..=max)
        .flat_map(|m| (0..=max).flat_map(move |n| enumerate_gamma(m, n, Budget::default()).unwrap()))
        .collect();
    let mut t = Tally::new();
    for f in &all {
        for g in &all {
            let (fi, fa, gi, ga) = (f.is_inert(), f.is_active(), g.is_inert(), g.is_active());
            if !(fi && gi) && !(fa && ga) {
                continue;
            }
            let h = mu(f, g);
            if fi && gi {
                t.record(h.is_inert(), || format!("mu({f}, {g}) not inert"));
            }
            if fa && ga {
                t.record(h.is_active(), || format!("mu({f}, {g}) not active"));
            }
        }
    }
    t
}

/// `encode` and `decode` are inverse for all `1 ≤ m, n ≤ max`.
pub fn check_index_roundtrip(max: usize) -> Tally {
    let mut t = Tally::new();
    for m in 1..=max {
        for n in 1..=max {
            let mut hit = vec![false; m * n + 1];
            for a in 1..=m {
                for b in 1..=n {
                    let x = encode(a, b, n);
                    let ok = (1..=m * n).contains(&x) && !hit[x] && decode(x, n) == (a, b);
                    if ok {
                        hit[x] = true;
                    }
                    t.record(ok, || format!("index ({a},{b}) in ⟨{m}·{n}⟩ does not round-trip"));
                }
            }
        }
    }
    t
}

/// `uⁿ` of each inert cell map `(ρ_{i₁},…,ρ_{i_n})` into `I` is some `ρ_x` of Γ.
pub fn check_segal_preservation(max: usize, arity: usize) -> Tally {
    let mut t = Tally::new();
    let objects = crate::simplex::cartesian(&vec![(1..=max).collect::<Vec<_>>(); arity]);
    for obj in objects {
        let obj = DeltaNObject(obj);
        let total = un_object(&obj);
        let mut seen = vec![false; total + 1];
        for rho in crate::simplex::inert_cell_maps(&obj) {
            let img = un(&rho);
            let hit = (1..=total).find(|&x| img == GammaMorphism::rho(x, total));
            match hit {
                Some(x) if !seen[x] => {
                    seen[x] = true;
                    t.pass();
                }
                _ => t.fail(|| format!("un({rho}) = {img} is not a fresh ρ")),
            }
        }
    }
    t
}
