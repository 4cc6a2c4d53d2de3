//! Slices Δⁿ/I, cellular and φ-cellular maps, active coslices, and the
//! explicit witnesses for the cofinality statements about them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::category::{check_coinitial_by_witness, CategoryFunctor, CommaSide, TruncatedCategory, WitnessReport};
use crate::error::{CombinatError, Result};
use crate::simplex::{
    cartesian, compose, enumerate_active, enumerate_morphisms, enumerate_n_morphisms, Budget, DeltaMorphism,
    DeltaNMorphism, DeltaNObject,
};
use crate::tally::Tally;

/// A map `J → I` in Δⁿ, i.e. an object of Δⁿ/I.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SliceObject {
    pub target: DeltaNObject,
    pub map: DeltaNMorphism,
}

impl SliceObject {
    /// The sequence `(i₀,…,i_m)` over `[n]`.
    pub fn from_sequence(n: usize, seq: Vec<usize>) -> Result<Self> {
        if seq.is_empty() {
            return Err(CombinatError::AugmentedRejected);
        }
        let m = DeltaMorphism::new(seq.len() - 1, n, seq)?;
        Ok(SliceObject { target: DeltaNObject(vec![n]), map: DeltaNMorphism::single(m) })
    }

    pub fn from_map(target: DeltaNObject, map: DeltaNMorphism) -> Result<Self> {
        if map.tgt() != target {
            return Err(CombinatError::InvalidSequence(target.0));
        }
        Ok(SliceObject { target, map })
    }

    /// The first component's values; the whole object when the arity is 1.
    pub fn sequence(&self) -> &[usize] {
        self.map.components()[0].values()
    }

    pub fn sequences(&self) -> Vec<&[usize]> {
        self.map.components().iter().map(DeltaMorphism::values).collect()
    }

    pub fn shape(&self) -> DeltaNObject {
        self.map.src()
    }

    pub fn is_cellular(&self) -> bool {
        self.map.components().iter().all(|c| is_cellular(c.values()))
    }
}

impl fmt::Display for SliceObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sequences().iter().enumerate() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(f, "{s:?}")?;
        }
        Ok(())
    }
}

/// Consecutive values rise by at most 1.
pub fn is_cellular(seq: &[usize]) -> bool {
    seq.windows(2).all(|w| w[1] <= w[0] + 1)
}

/// Conditions (i)–(iii) for `alpha` relative to an injective `phi` with the same target.
pub fn is_phi_cellular(alpha: &DeltaMorphism, phi: &DeltaMorphism) -> Result<bool> {
    if !phi.is_injective() {
        return Err(CombinatError::NotInjective);
    }
    if alpha.tgt() != phi.tgt() {
        return Err(CombinatError::NotComposable { left: alpha.tgt().dim(), right: phi.tgt().dim() });
    }
    let p = phi.values();
    let (first, last) = (p[0], p[p.len() - 1]);
    Ok(alpha.values().windows(2).all(|w| {
        let (a, next) = (w[0], w[1]);
        if a < first || a >= last {
            next <= a + 1
        } else {
            // φ(j) ≤ a < φ(j+1)
            let j = p.partition_point(|&v| v <= a) - 1;
            next <= p[j + 1]
        }
    }))
}

/// All monotone `φ` with `x ∘ φ = y`, for value sequences `x`, `y`.
pub fn lifts(y: &[usize], x: &[usize]) -> Vec<Vec<usize>> {
    fn go(y: &[usize], x: &[usize], from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(&want) = y.get(cur.len()) else {
            out.push(cur.clone());
            return;
        };
        for (pos, &v) in x.iter().enumerate().skip(from) {
            if v > want {
                break;
            }
            if v == want {
                cur.push(pos);
                go(y, x, pos, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(y, x, 0, &mut Vec::with_capacity(y.len()), &mut out);
    out
}

fn component_lifts(y: &SliceObject, x: &SliceObject) -> Vec<DeltaNMorphism> {
    let per: Vec<Vec<DeltaMorphism>> = y
        .map
        .components()
        .iter()
        .zip(x.map.components())
        .map(|(yc, xc)| {
            let (src, tgt) = (yc.src().n(), xc.src().n());
            lifts(yc.values(), xc.values())
                .into_iter()
                .map(|v| DeltaMorphism::new(src, tgt, v).expect("lift is monotone"))
                .collect()
        })
        .collect();
    cartesian(&per).into_iter().map(DeltaNMorphism).collect()
}

/// Δⁿ/I with every component of the source of dimension ≤ `d`.
pub fn slice_category(target: &DeltaNObject, d: usize, budget: Budget) -> Result<TruncatedCategory<SliceObject>> {
    let per: Vec<Vec<DeltaMorphism>> = target
        .0
        .iter()
        .map(|&n| {
            (0..=d)
                .map(|m| enumerate_morphisms(m, n, budget))
                .collect::<Result<Vec<_>>>()
                .map(|v| v.concat())
        })
        .collect::<Result<_>>()?;
    let total: u128 = per.iter().map(|v| v.len() as u128).product();
    budget.check(total, "slice objects")?;
    let objects = cartesian(&per)
        .into_iter()
        .map(|c| SliceObject { target: target.clone(), map: DeltaNMorphism(c) })
        .collect();
    TruncatedCategory::from_candidates(d, objects, SliceObject::shape, component_lifts, budget)
}

/// The cellular objects of Δ/[n] (the category Λ/[n]), truncated at `d`.
pub fn cellular_slice(n: usize, d: usize, budget: Budget) -> Result<TruncatedCategory<SliceObject>> {
    let objects = (0..=d)
        .map(|m| enumerate_morphisms(m, n, budget))
        .collect::<Result<Vec<_>>>()?
        .concat()
        .into_iter()
        .filter(|f| is_cellular(f.values()))
        .map(|f| SliceObject { target: DeltaNObject(vec![n]), map: DeltaNMorphism::single(f) })
        .collect();
    TruncatedCategory::from_candidates(d, objects, SliceObject::shape, component_lifts, budget)
}

/// An object `γ → ξ` of an active coslice: `α` active with `ξ ∘ α = γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosliceObject {
    pub xi: DeltaMorphism,
    pub alpha: DeltaMorphism,
}

impl CosliceObject {
    pub fn shape(&self) -> DeltaNObject {
        DeltaNObject(vec![self.xi.src().n()])
    }
}

/// Active maps out of `gamma` to objects `ξ : [p] → [n]` accepted by `accept`,
/// `p ≤ d`, with active morphisms that also pass `keep_arrow`.
pub fn active_coslice_with(
    gamma: &DeltaMorphism,
    d: usize,
    accept: impl Fn(&DeltaMorphism) -> bool,
    keep_arrow: impl Fn(&CosliceObject, &CosliceObject, &DeltaMorphism) -> bool,
    budget: Budget,
) -> Result<TruncatedCategory<CosliceObject>> {
    let (k, n) = (gamma.src().n(), gamma.tgt().n());
    let mut objects = Vec::new();
    for p in 0..=d {
        let actives = enumerate_active(k, p, budget)?;
        for xi in enumerate_morphisms(p, n, budget)?.into_iter().filter(|x| accept(x)) {
            for alpha in &actives {
                if compose(alpha, &xi)? == *gamma {
                    objects.push(CosliceObject { xi: xi.clone(), alpha: alpha.clone() });
                }
            }
        }
    }
    TruncatedCategory::from_candidates(
        d,
        objects,
        CosliceObject::shape,
        |x, y| {
            lifts(x.xi.values(), y.xi.values())
                .into_iter()
                .map(|v| DeltaMorphism::new(x.xi.src().n(), y.xi.src().n(), v).expect("lift is monotone"))
                .filter(|l| l.is_active() && compose(&x.alpha, l).ok().as_ref() == Some(&y.alpha))
                .filter(|l| keep_arrow(x, y, l))
                .map(DeltaNMorphism::single)
                .collect()
        },
        budget,
    )
}

/// `(Λ/[n])^act_{γ/}` truncated at `d`.
pub fn active_coslice(gamma: &DeltaMorphism, d: usize, budget: Budget) -> Result<TruncatedCategory<CosliceObject>> {
    active_coslice_with(gamma, d, |x| is_cellular(x.values()), |_, _, _| true, budget)
}

/// A map φ is cellular iff every `φ ∘ ρ_i` is, for all `φ : [m] → [n]`, `m, n ≤ max`.
pub fn check_cellularity_criterion(max: usize) -> Tally {
    let mut t = Tally::new();
    for m in 0..=max {
        for n in 0..=max {
            for phi in enumerate_morphisms(m, n, Budget::default()).unwrap() {
                let direct = is_cellular(phi.values());
                let via_cells = (1..=m).all(|i| {
                    let c = compose(&DeltaMorphism::rho(i, m), &phi).unwrap();
                    c.values()[1] <= c.values()[0] + 1
                });
                t.record(direct == via_cells, || format!("criterion fails for {phi}"));
            }
        }
    }
    t
}

/// With `φ = id`, φ-cellular agrees with cellular, for all maps with ends ≤ `max`.
pub fn check_phi_identity(max: usize) -> Tally {
    let mut t = Tally::new();
    for n in 0..=max {
        let id = DeltaMorphism::identity(n);
        for k in 0..=max {
            for a in enumerate_morphisms(k, n, Budget::default()).unwrap() {
                let ok = is_phi_cellular(&a, &id) == Ok(is_cellular(a.values()));
                t.record(ok, || format!("φ = id disagrees on {a}"));
            }
        }
    }
    t
}

/// Object and morphism counts of Δ²/(I₁,I₂) are products of those of Δ/I₁ and Δ/I₂.
pub fn check_slice_product(max_component: usize, max_d: usize) -> Tally {
    let mut t = Tally::new();
    let b = Budget::default();
    for d in 0..=max_d {
        let singles: Vec<(usize, usize)> = (0..=max_component)
            .map(|i| {
                let c = slice_category(&DeltaNObject(vec![i]), d, b).unwrap();
                (c.objects().len(), c.size())
            })
            .collect();
        for i in 0..=max_component {
            for j in 0..=max_component {
                let c = slice_category(&DeltaNObject(vec![i, j]), d, b).unwrap();
                let expect = (singles[i].0 * singles[j].0, singles[i].1 * singles[j].1);
                let got = (c.objects().len(), c.size());
                t.record(got == expect, || format!("Δ²/([{i}],[{j}]) at {d}: {got:?} vs {expect:?}"));
            }
        }
    }
    t
}

/// One factor `[1] → [n_p] → [i]` of an object of the product of coslices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluePart {
    pub f: DeltaMorphism,
    pub c: DeltaMorphism,
}

/// The glued object `[j] → [n] → [i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Glued {
    pub f: DeltaMorphism,
    pub c: DeltaMorphism,
}

fn check_parts(xi: &DeltaMorphism, parts: &[GluePart]) -> Result<()> {
    let j = xi.src().n();
    let i = xi.tgt();
    if parts.len() != j {
        return Err(CombinatError::BadGluingData(format!("{} parts for [{j}]", parts.len())));
    }
    for (p, part) in parts.iter().enumerate() {
        let p = p + 1;
        if part.f.src().n() != 1 || !part.f.is_active() {
            return Err(CombinatError::BadGluingData(format!("f_{p} = {} is not active out of [1]", part.f)));
        }
        if part.c.tgt() != i || !is_cellular(part.c.values()) {
            return Err(CombinatError::BadGluingData(format!("c_{p} = {} is not cellular into {i}", part.c)));
        }
        let edge = compose(&DeltaMorphism::rho(p, j), xi)?;
        if compose(&part.f, &part.c)? != edge {
            return Err(CombinatError::BadGluingData(format!("c_{p} f_{p} differs from ξρ_{p}")));
        }
    }
    Ok(())
}

/// Glues the factors: `n = Σ n_p`, `c η_p = c_p`, `f(p) = n_1 + … + n_p`.
pub fn glue_final_object(xi: &DeltaMorphism, parts: &[GluePart]) -> Result<Glued> {
    check_parts(xi, parts)?;
    let i = xi.tgt().n();
    let mut c = vec![xi.at(0)];
    let mut f = vec![0];
    for part in parts {
        c.extend_from_slice(&part.c.values()[1..]);
        f.push(c.len() - 1);
    }
    let n = c.len() - 1;
    Ok(Glued { f: DeltaMorphism::new(xi.src().n(), n, f)?, c: DeltaMorphism::new(n, i, c)? })
}

/// Every object of the comma category over the parts, with source ≤ `d`, has
/// exactly one morphism to the glued object. Counts the morphisms by brute force.
pub fn certify_glue_final(xi: &DeltaMorphism, parts: &[GluePart], glued: &Glued, d: usize) -> Result<Tally> {
    let (j, i) = (xi.src().n(), xi.tgt().n());
    let b = Budget::default();
    let offsets: Vec<usize> = glued.f.values().to_vec();
    let mut t = Tally::new();
    for m in 0..=d {
        let gammas: Vec<DeltaMorphism> =
            enumerate_morphisms(m, i, b)?.into_iter().filter(|g| is_cellular(g.values())).collect();
        for fp in enumerate_active(j, m, b)? {
            for gamma in gammas.iter().filter(|g| compose(&fp, g).ok().as_ref() == Some(xi)) {
                // choices of g_p : [m_p] → [n_p] active with c_p g_p = γ on the p-th interval
                let per_part: Vec<Vec<Vec<usize>>> = parts
                    .iter()
                    .enumerate()
                    .map(|(p, part)| {
                        let piece = &gamma.values()[fp.at(p)..=fp.at(p + 1)];
                        lifts(piece, part.c.values())
                            .into_iter()
                            .filter(|g| g[0] == 0 && g[g.len() - 1] == part.c.src().n())
                            .collect()
                    })
                    .collect();
                for gs in cartesian(&per_part) {
                    let count = lifts(gamma.values(), glued.c.values())
                        .into_iter()
                        .filter(|h| {
                            h[0] == 0
                                && h[m] == glued.c.src().n()
                                && fp.values().iter().zip(glued.f.values()).all(|(&x, &y)| h[x] == y)
                                && gs.iter().enumerate().all(|(p, g)| {
                                    g.iter().enumerate().all(|(q, &v)| h[fp.at(p) + q] == offsets[p] + v)
                                })
                        })
                        .count();
                    t.record(count == 1, || {
                        format!("object f'={fp} γ={gamma} g={gs:?} has {count} maps to glued {}", glued.c)
                    });
                }
            }
        }
    }
    Ok(t)
}

/// All families of parts over `ξ` whose glued object has dimension ≤ `d`.
pub fn enumerate_glue_inputs(xi: &DeltaMorphism, d: usize) -> Vec<Vec<GluePart>> {
    let (j, i) = (xi.src().n(), xi.tgt().n());
    let mut out = Vec::new();
    fn go(xi: &DeltaMorphism, i: usize, j: usize, left: usize, acc: &mut Vec<GluePart>, out: &mut Vec<Vec<GluePart>>) {
        let p = acc.len() + 1;
        if p > j {
            out.push(acc.clone());
            return;
        }
        let (from, to) = (xi.at(p - 1), xi.at(p));
        for np in 0..=left {
            let f = DeltaMorphism::new(1, np, vec![0, np]).unwrap();
            for c in enumerate_morphisms(np, i, Budget::default()).unwrap() {
                if c.at(0) == from && c.at(np) == to && is_cellular(c.values()) {
                    acc.push(GluePart { f: f.clone(), c });
                    go(xi, i, j, left - np, acc, out);
                    acc.pop();
                }
            }
        }
    }
    go(xi, i, j, d, &mut Vec::new(), &mut out);
    out
}

/// Glues and certifies every input over every `ξ : [j] → [i]`, `i ≤ max_i`, `j ≤ max_j`.
pub fn check_glue_all(max_i: usize, max_j: usize, d: usize) -> Tally {
    let mut t = Tally::new();
    for i in 0..=max_i {
        for j in 0..=max_j {
            for xi in enumerate_morphisms(j, i, Budget::default()).unwrap() {
                for parts in enumerate_glue_inputs(&xi, d) {
                    let result = glue_final_object(&xi, &parts).and_then(|g| {
                        let ok = is_cellular(g.c.values()) && g.f.is_active() && compose(&g.f, &g.c)? == xi;
                        certify_glue_final(&xi, &parts, &g, d).map(|c| ok && c.ok())
                    });
                    t.record(result == Ok(true), || format!("gluing over ξ={xi} fails: {result:?}"));
                }
            }
        }
    }
    t
}

/// Data `X` for the degeneracy case: `γ : [k] → [l+1]`, `α : [k] → [p]`
/// active, `ξ : [p] → [l]` cellular, `ξ α = s_t γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaData {
    pub gamma: DeltaMorphism,
    pub t: usize,
    pub alpha: DeltaMorphism,
    pub xi: DeltaMorphism,
}

impl LambdaData {
    pub fn new(gamma: DeltaMorphism, t: usize, alpha: DeltaMorphism, xi: DeltaMorphism) -> Result<Self> {
        let l = xi.tgt().n();
        if gamma.tgt().n() != l + 1 || t > l {
            return Err(CombinatError::Inconsistent(format!("γ={gamma} does not map to [{}] or t={t} too big", l + 1)));
        }
        if !alpha.is_active() || !is_cellular(xi.values()) {
            return Err(CombinatError::Inconsistent("α must be active and ξ cellular".into()));
        }
        let st = DeltaMorphism::degeneracy(t, l);
        if compose(&alpha, &xi)? != compose(&gamma, &st)? {
            return Err(CombinatError::Inconsistent("ξα differs from s_t γ".into()));
        }
        Ok(LambdaData { gamma, t, alpha, xi })
    }

    fn images_where(&self, level: usize) -> impl Iterator<Item = usize> + '_ {
        self.gamma.values().iter().zip(self.alpha.values()).filter(move |(&g, _)| g == level).map(|(_, &a)| a)
    }

    fn admissible(&self, a: usize, b: usize) -> bool {
        let t = self.t;
        a <= b
            && self.xi.at(a) == t
            && self.xi.at(b) == t
            && self.images_where(t).all(|x| x <= a)
            && self.images_where(t + 1).all(|x| x >= b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaPoset {
    pub elements: Vec<(usize, usize)>,
    /// from the closed formula
    pub formula: (usize, usize),
    /// the element below all others, by exhaustive comparison
    pub minimum: Option<(usize, usize)>,
}

/// `(a, b) ≤ (a′, b′)` iff `a ≤ a′ ≤ b′ ≤ b`.
pub fn lambda_le(x: (usize, usize), y: (usize, usize)) -> bool {
    x.0 <= y.0 && y.0 <= y.1 && y.1 <= x.1
}

/// The closed form of the minimum: `A` is the largest of `min ξ⁻¹(t)` and the
/// `α(i)` with `γ(i) = t`; `B` is the least `α(i)` with `γ(i) = t+1`, or
/// `max ξ⁻¹(t)` if there is none.
pub fn lambda_formula(x: &LambdaData) -> Option<(usize, usize)> {
    let fiber: Vec<usize> = (0..x.xi.values().len()).filter(|&q| x.xi.at(q) == x.t).collect();
    let (&lo, &hi) = (fiber.first()?, fiber.last()?);
    let a = x.images_where(x.t).fold(lo, usize::max);
    let b = x.images_where(x.t + 1).min().unwrap_or(hi);
    Some((a, b))
}

pub fn lambda_x_poset(x: &LambdaData) -> Result<LambdaPoset> {
    let p = x.xi.src().n();
    let elements: Vec<(usize, usize)> =
        (0..=p).flat_map(|a| (a..=p).map(move |b| (a, b))).filter(|&(a, b)| x.admissible(a, b)).collect();
    if elements.is_empty() {
        return Err(CombinatError::EmptyPoset);
    }
    let formula = lambda_formula(x).ok_or(CombinatError::EmptyPoset)?;
    let minimum = elements.iter().copied().find(|&m| elements.iter().all(|&e| lambda_le(m, e)));
    Ok(LambdaPoset { elements, formula, minimum })
}

/// The diagram `[k] → [q] → [p]` over `[l+1] → [l]` attached to `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaDiagram {
    pub pi: DeltaMorphism,
    pub lambda: DeltaMorphism,
    pub theta: DeltaMorphism,
}

pub fn lambda_diagram(x: &LambdaData, (a, b): (usize, usize)) -> Result<LambdaDiagram> {
    let p = x.xi.src().n();
    let q = p + a + 1 - b;
    // positions strictly between a and b collapse; a = b inserts one point
    let lambda: Vec<usize> = (0..=q).map(|i| if i <= a { i } else { i + b - (a + 1) }).collect();
    let theta: Vec<usize> = (0..=q).map(|i| x.xi.at(lambda[i]) + usize::from(i > a)).collect();
    // split on γ: a point with α(i) = a = b and γ(i) = t+1 goes to the new point a+1
    let pi: Vec<usize> = x
        .alpha
        .values()
        .iter()
        .zip(x.gamma.values())
        .map(|(&v, &g)| if g <= x.t { v } else { v + a + 1 - b })
        .collect();
    let l = x.xi.tgt().n();
    Ok(LambdaDiagram {
        pi: DeltaMorphism::new(x.alpha.src().n(), q, pi)?,
        lambda: DeltaMorphism::new(q, p, lambda)?,
        theta: DeltaMorphism::new(q, l + 1, theta)?,
    })
}

/// `θ` cellular, `λ`, `π` active, `λπ = α`, `θπ = γ`, `ξλ = s_t θ`.
pub fn lambda_diagram_valid(x: &LambdaData, g: &LambdaDiagram) -> bool {
    let st = DeltaMorphism::degeneracy(x.t, x.xi.tgt().n());
    is_cellular(g.theta.values())
        && g.lambda.is_active()
        && g.pi.is_active()
        && compose(&g.pi, &g.lambda).ok().as_ref() == Some(&x.alpha)
        && compose(&g.pi, &g.theta).ok().as_ref() == Some(&x.gamma)
        && compose(&g.lambda, &x.xi).ok() == compose(&g.theta, &st).ok()
}

/// The diagrams `G_X(a, b)` only have active `π` when `γ` does not start at
/// `t+1` and does not end at `t`; otherwise `π` cannot hit both endpoints.
pub fn lambda_diagram_defined(x: &LambdaData) -> bool {
    let g = x.gamma.values();
    g[0] != x.t + 1 && g[g.len() - 1] != x.t
}

/// `γ` neither hits `t`, `t+1` nor jumps over them.
pub fn lambda_predicted_empty(gamma: &DeltaMorphism, t: usize) -> bool {
    let v = gamma.values();
    v.iter().all(|&g| g != t && g != t + 1) && !v.windows(2).any(|w| w[0] < t && w[1] > t + 1)
}

/// Every instance with `l ≤ max_l`, `k, p ≤ d`: formula = exhaustive minimum,
/// every `G_X(a, b)` is a valid diagram, and empty posets occur exactly where predicted.
pub fn check_lambda_all(max_l: usize, d: usize) -> Tally {
    let mut t = Tally::new();
    let b = Budget::default();
    for l in 0..=max_l {
        for p in 0..=d {
            let xis: Vec<DeltaMorphism> =
                enumerate_morphisms(p, l, b).unwrap().into_iter().filter(|x| is_cellular(x.values())).collect();
            for k in 0..=d {
                let alphas = enumerate_active(k, p, b).unwrap();
                for xi in &xis {
                    for alpha in &alphas {
                        let xa = compose(alpha, xi).unwrap();
                        for tt in 0..=l {
                            let st = DeltaMorphism::degeneracy(tt, l);
                            for g in lifts(xa.values(), st.values()) {
                                let gamma = DeltaMorphism::new(k, l + 1, g).unwrap();
                                let x = LambdaData::new(gamma.clone(), tt, alpha.clone(), xi.clone()).unwrap();
                                match lambda_x_poset(&x) {
                                    Err(CombinatError::EmptyPoset) => {
                                        t.record(lambda_predicted_empty(&gamma, tt), || {
                                            format!("unexpected empty poset: γ={gamma} t={tt} α={alpha} ξ={xi}")
                                        });
                                    }
                                    Err(e) => t.fail(|| format!("{e}")),
                                    Ok(poset) => {
                                        let ok = poset.minimum == Some(poset.formula)
                                            && !lambda_predicted_empty(&gamma, tt)
                                            && (!lambda_diagram_defined(&x)
                                                || poset.elements.iter().all(|&e| {
                                                    lambda_diagram(&x, e)
                                                        .is_ok_and(|g| lambda_diagram_valid(&x, &g))
                                                }));
                                        t.record(ok, || {
                                            format!(
                                                "γ={gamma} t={tt} α={alpha} ξ={xi}: formula {:?}, minimum {:?}",
                                                poset.formula, poset.minimum
                                            )
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    t
}

/// `(i, (i+1)^{a₁+1}, …, (i+k-1)^{a_{k-1}+1}, i+k)`.
pub fn sift_sequence(i: usize, a: &[usize]) -> Vec<usize> {
    let mut s = vec![i];
    for (j, &aj) in a.iter().enumerate() {
        s.extend(std::iter::repeat_n(i + j + 1, aj + 1));
    }
    s.push(i + a.len() + 1);
    s
}

/// Source and target categories of the sifted functor at `(i, i+k)`: Δ^{k-1}
/// truncated so the image has dimension ≤ `d`, and the active cellular
/// sequences from `i` to `i+k`.
pub fn sift_categories(
    i: usize,
    k: usize,
    d: usize,
) -> Result<(TruncatedCategory<DeltaNObject>, TruncatedCategory<SliceObject>)> {
    assert!(k >= 1);
    let b = Budget::default();
    let n = i + k;
    let cap = d.saturating_sub(1);
    let dom_objects: Vec<DeltaNObject> = cartesian(&vec![(0..=cap).collect::<Vec<_>>(); k - 1])
        .into_iter()
        .filter(|a| a.iter().map(|x| x + 1).sum::<usize>() < d)
        .map(DeltaNObject)
        .collect();
    let domain = TruncatedCategory::from_candidates(
        d,
        dom_objects,
        Clone::clone,
        |x, y| enumerate_n_morphisms(x, y, b).unwrap_or_default(),
        b,
    )?;
    let cod_objects = (1..=d)
        .flat_map(|m| enumerate_morphisms(m, n, b).unwrap())
        .filter(|f| f.at(0) == i && f.at(f.src().n()) == n && is_cellular(f.values()))
        .map(|f| SliceObject { target: DeltaNObject(vec![n]), map: DeltaNMorphism::single(f) })
        .collect();
    let codomain = TruncatedCategory::from_candidates(
        d,
        cod_objects,
        SliceObject::shape,
        |x, y| component_lifts(x, y).into_iter().filter(DeltaNMorphism::is_active).collect(),
        b,
    )?;
    Ok((domain, codomain))
}

/// The sifted functor on the truncations built by [`sift_categories`].
pub fn sift_functor<'a>(
    i: usize,
    domain: &'a TruncatedCategory<DeltaNObject>,
    codomain: &'a TruncatedCategory<SliceObject>,
) -> Result<CategoryFunctor<'a, DeltaNObject, SliceObject>> {
    let n = codomain.objects().first().map_or(i + 1, |o| o.target.0[0]);
    CategoryFunctor::new(
        domain,
        codomain,
        |a| SliceObject::from_sequence(n, sift_sequence(i, &a.0)).expect("sift sequence is monotone"),
        |f| {
            let (src, tgt) = (f.map.src(), f.map.tgt());
            let mut v = vec![0];
            let mut off = 1;
            for (c, &t) in f.map.components().iter().zip(&tgt.0) {
                v.extend(c.values().iter().map(|&x| x + off));
                off += t + 1;
            }
            v.push(off);
            let s: usize = src.0.iter().map(|x| x + 1).sum::<usize>() + 1;
            DeltaNMorphism::single(DeltaMorphism::new(s, off, v).expect("block map is monotone"))
        },
    )
}

/// Every comma category of the sifted functor has a terminal object, and it is
/// the one with `a_j = b_j − 1` where `b_j` counts the copies of `i+j`.
pub fn check_sift(i: usize, k: usize, d: usize) -> Result<(WitnessReport, Tally)> {
    let (dom, cod) = sift_categories(i, k, d)?;
    let f = sift_functor(i, &dom, &cod)?;
    let mut t = f.check_functorial();
    let report = check_coinitial_by_witness(&f, CommaSide::OverTerminal, "sifted functor");
    for x in 0..cod.objects().len() {
        let seq = cod.object(x).sequence();
        let expect: Vec<usize> =
            (1..k).map(|j| seq.iter().filter(|&&v| v == i + j).count() - 1).collect();
        let terminals = f.terminal_in_comma_over(x);
        let ok = terminals.len() == 1 && dom.object(terminals[0].0).0 == expect && {
            // the structure map is injective and hits every position strictly between i and i+k
            let g = cod.arrow(terminals[0].1).map.components()[0].values();
            g.windows(2).all(|w| w[0] < w[1])
                && (0..seq.len()).filter(|&q| seq[q] > i && seq[q] < i + k).all(|q| g.contains(&q))
        };
        t.record(ok, || format!("comma over {seq:?}: terminal {terminals:?}, expected a = {expect:?}"));
    }
    Ok((report, t))
}

/// The injective case: for `φ : [m] → [n]` and `γ : [k] → [m]`, composition
/// with `φ` has a terminal object in every comma category, equal to the
/// preimage-of-image construction.
pub fn check_injective_cellular(phi: &DeltaMorphism, gamma: &DeltaMorphism, d: usize) -> Result<(WitnessReport, Tally)> {
    if !phi.is_injective() {
        return Err(CombinatError::NotInjective);
    }
    let b = Budget::default();
    let pg = compose(gamma, phi)?;
    let dom = active_coslice(gamma, d, b)?;
    let cod = active_coslice_with(&pg, d, |x| is_phi_cellular(x, phi).unwrap_or(false), |_, _, _| true, b)?;
    let f = CategoryFunctor::new(
        &dom,
        &cod,
        |o| CosliceObject { xi: compose(&o.xi, phi).expect("composable"), alpha: o.alpha.clone() },
        |a| a.map.clone(),
    )?;
    let report = check_coinitial_by_witness(&f, CommaSide::OverTerminal, "composition with injective φ");
    let mut t = f.check_functorial();
    for x in 0..cod.objects().len() {
        let CosliceObject { xi, alpha } = cod.object(x);
        let image = phi.values();
        let kept: Vec<usize> = (0..=xi.src().n()).filter(|&q| image.contains(&xi.at(q))).collect();
        let q = kept.len() - 1;
        let theta: Vec<usize> = kept.iter().map(|&s| image.iter().position(|&v| v == xi.at(s)).unwrap()).collect();
        let pi: Option<Vec<usize>> = alpha.values().iter().map(|v| kept.iter().position(|s| s == v)).collect();
        let expected = pi.and_then(|pi| {
            let obj = CosliceObject {
                xi: DeltaMorphism::new(q, phi.src().n(), theta).ok()?,
                alpha: DeltaMorphism::new(gamma.src().n(), q, pi).ok()?,
            };
            let lambda = DeltaMorphism::new(q, xi.src().n(), kept.clone()).ok()?;
            let a = dom.find(&obj)?;
            cod.find_arrow(f.on_objects[a], x, &DeltaNMorphism::single(lambda)).map(|g| (a, g))
        });
        let terminals = f.terminal_in_comma_over(x);
        t.record(expected.is_some() && terminals == expected.into_iter().collect::<Vec<_>>(), || {
            format!("over ξ={xi} α={alpha}: terminals {terminals:?}, formula {expected:?}")
        });
    }
    Ok((report, t))
}

/// Which maps of Δ/[1] are kept in 𝒰: with `s` the last 0 of the source
/// sequence and `t` the last 0 of the target, keep iff the source is constant
/// or the image of `φ` contains `t` and `t+1`.
pub fn u_keeps(src: &[usize], tgt: &[usize], phi: &[usize]) -> bool {
    let s = src.iter().rposition(|&v| v == 0);
    let t = tgt.iter().rposition(|&v| v == 0);
    match (s, t) {
        (None, _) => true,
        (Some(s), _) if s == src.len() - 1 => true,
        (Some(_), Some(t)) => phi.contains(&t) && phi.contains(&(t + 1)),
        (Some(_), None) => false,
    }
}

fn over_one(d: usize, b: Budget) -> Result<Vec<SliceObject>> {
    Ok((0..=d)
        .map(|m| enumerate_morphisms(m, 1, b))
        .collect::<Result<Vec<_>>>()?
        .concat()
        .into_iter()
        .map(|f| SliceObject { target: DeltaNObject(vec![1]), map: DeltaNMorphism::single(f) })
        .collect())
}

/// The subcategory 𝒰 ⊆ Δ/[1], truncated at `d`.
pub fn build_u_category(d: usize) -> Result<TruncatedCategory<SliceObject>> {
    let b = Budget::default();
    TruncatedCategory::from_candidates(
        d,
        over_one(d, b)?,
        SliceObject::shape,
        |x, y| {
            component_lifts(x, y)
                .into_iter()
                .filter(|m| u_keeps(x.sequence(), y.sequence(), m.components()[0].values()))
                .collect()
        },
        b,
    )
}

/// 𝒰 is a category, contains every inert map of Δ/[1], and for every `X` of
/// dimension ≤ `d − 2` the 𝒰-active maps out of `X` have an initial object
/// (`X` with its 0/1 transition doubled).
pub fn check_u(d: usize) -> Result<Tally> {
    let b = Budget::default();
    let u = build_u_category(d)?;
    let full = slice_category(&DeltaNObject(vec![1]), d, b)?;
    let mut t = u.check_axioms();
    for a in full.arrows() {
        if a.map.is_inert() {
            let kept = u.find_arrow(a.src, a.tgt, &a.map).is_some();
            t.record(kept, || format!("inert {} missing", a.map));
        }
    }
    for x in over_one(d.saturating_sub(2), b)? {
        let seq = x.sequence();
        let cat = active_coslice_with(
            &x.map.components()[0],
            d,
            |_| true,
            |p, q, l| u_keeps(p.xi.values(), q.xi.values(), l.values()),
            b,
        )?;
        let expected: Vec<usize> = match seq.iter().rposition(|&v| v == 0) {
            Some(z) if z + 1 < seq.len() => {
                let mut e = seq[..=z].to_vec();
                e.push(0);
                e.push(1);
                e.extend_from_slice(&seq[z + 1..]);
                e
            }
            _ => seq.to_vec(),
        };
        let initial = cat.initial_objects();
        let ok = initial.len() == 1 && cat.object(initial[0]).xi.values() == expected.as_slice();
        t.record(ok, || format!("active 𝒰-maps out of {seq:?}: initial {initial:?}, expected {expected:?}"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tally::Verdict;

    fn d(src: usize, tgt: usize, v: &[usize]) -> DeltaMorphism {
        DeltaMorphism::new(src, tgt, v.to_vec()).unwrap()
    }

    fn seqs(c: &TruncatedCategory<SliceObject>) -> Vec<Vec<usize>> {
        c.objects().iter().map(|o| o.sequence().to_vec()).collect()
    }

    #[test]
    fn slice_examples() {
        let b = Budget::default();
        let c = slice_category(&DeltaNObject(vec![1]), 1, b).unwrap();
        assert_eq!(seqs(&c), vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert!(c.check_axioms().ok());
        let c = slice_category(&DeltaNObject(vec![2]), 1, b).unwrap();
        assert_eq!(c.objects().len(), 9);
        // over [0] every ordinal appears once and morphisms are all of Δ
        let c = slice_category(&DeltaNObject(vec![0]), 3, b).unwrap();
        assert_eq!(c.objects().len(), 4);
        assert_eq!(c.size(), 121);
    }

    #[test]
    fn slice_json_round_numbers() {
        let c = slice_category(&DeltaNObject(vec![1]), 1, Budget::default()).unwrap();
        let v = c.to_json();
        assert_eq!(v["objects"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn cellular_examples() {
        assert!(is_cellular(&[0, 1, 1, 2]));
        assert!(!is_cellular(&[0, 2]));
        assert!(is_cellular(&[3, 3, 3]));
    }

    #[test]
    fn phi_cellular_examples() {
        let phi = d(1, 2, &[0, 2]);
        assert_eq!(is_phi_cellular(&d(1, 2, &[0, 2]), &phi), Ok(true));
        assert_eq!(is_phi_cellular(&d(2, 2, &[1, 1, 1]), &phi), Ok(true));
        // a jump of 2 starting at the top of the image is not allowed
        let phi = d(1, 3, &[0, 1]);
        assert_eq!(is_phi_cellular(&d(1, 3, &[1, 3]), &phi), Ok(false));
        assert_eq!(is_phi_cellular(&d(1, 3, &[0, 1]), &d(1, 3, &[1, 1])), Err(CombinatError::NotInjective));
    }

    #[test]
    fn criteria_small() {
        assert!(check_cellularity_criterion(4).ok());
        assert!(check_phi_identity(4).ok());
        assert!(check_slice_product(1, 1).ok());
    }

    #[test]
    fn active_coslice_examples() {
        let b = Budget::default();
        let c = active_coslice(&d(1, 1, &[0, 1]), 3, b).unwrap();
        assert_eq!(c.objects().len(), 6);
        assert!(c.check_axioms().ok());
        // (0,2) over [2] refines to (0,1,…,1,2)
        let c = active_coslice(&d(1, 2, &[0, 2]), 4, b).unwrap();
        let xs: Vec<Vec<usize>> = c.objects().iter().map(|o| o.xi.values().to_vec()).collect();
        assert!(xs.contains(&vec![0, 1, 2]));
        assert!(xs.contains(&vec![0, 1, 1, 1, 2]));
        assert!(xs.iter().all(|x| is_cellular(x)));
        // γ already of maximal refinement within the truncation
        let c = active_coslice(&d(0, 0, &[0]), 0, b).unwrap();
        assert_eq!(c.initial_objects(), vec![0]);
    }

    #[test]
    fn lifts_match_brute_force() {
        let x = [0, 0, 1, 2, 2];
        let y = [0, 2, 2];
        let brute: Vec<Vec<usize>> = enumerate_morphisms(2, 4, Budget::default())
            .unwrap()
            .into_iter()
            .filter(|f| f.values().iter().map(|&i| x[i]).eq(y.iter().copied()))
            .map(|f| f.values().to_vec())
            .collect();
        assert_eq!(lifts(&y, &x), brute);
    }

    #[test]
    fn glue_examples() {
        let xi = DeltaMorphism::identity(2);
        let parts = vec![
            GluePart { f: d(1, 1, &[0, 1]), c: d(1, 2, &[0, 1]) },
            GluePart { f: d(1, 1, &[0, 1]), c: d(1, 2, &[1, 2]) },
        ];
        let g = glue_final_object(&xi, &parts).unwrap();
        assert_eq!(g.c.values(), &[0, 1, 2]);
        assert_eq!(g.f.values(), &[0, 1, 2]);
        assert!(certify_glue_final(&xi, &parts, &g, 4).unwrap().ok());

        // a single factor glues to itself
        let xi = d(1, 2, &[0, 2]);
        let parts = vec![GluePart { f: d(1, 2, &[0, 2]), c: d(2, 2, &[0, 1, 2]) }];
        let g = glue_final_object(&xi, &parts).unwrap();
        assert_eq!(g, Glued { f: parts[0].f.clone(), c: parts[0].c.clone() });
        assert!(certify_glue_final(&xi, &parts, &g, 4).unwrap().ok());

        let bad = vec![GluePart { f: d(1, 2, &[0, 2]), c: d(2, 2, &[0, 1, 1]) }];
        assert!(matches!(glue_final_object(&xi, &bad), Err(CombinatError::BadGluingData(_))));
    }

    #[test]
    fn glue_certificate_detects_wrong_object() {
        let xi = DeltaMorphism::identity(2);
        let parts = vec![
            GluePart { f: d(1, 1, &[0, 1]), c: d(1, 2, &[0, 1]) },
            GluePart { f: d(1, 1, &[0, 1]), c: d(1, 2, &[1, 2]) },
        ];
        // a non-glued object of the comma category is not final
        let wrong = Glued { f: d(2, 3, &[0, 1, 3]), c: d(3, 2, &[0, 1, 1, 2]) };
        assert!(!certify_glue_final(&xi, &parts, &wrong, 4).unwrap().ok());
    }

    #[test]
    fn glue_small_sweep() {
        assert!(check_glue_all(2, 2, 3).ok());
    }

    #[test]
    fn lambda_examples() {
        // ξ = (0,1,1,2) over [2], t = 1, γ lifting ξ
        let xi = d(3, 2, &[0, 1, 1, 2]);
        let alpha = DeltaMorphism::identity(3);
        let gamma = d(3, 3, &[0, 1, 2, 3]);
        let x = LambdaData::new(gamma, 1, alpha, xi).unwrap();
        let poset = lambda_x_poset(&x).unwrap();
        assert_eq!(poset.formula, (1, 2));
        assert_eq!(poset.minimum, Some((1, 2)));
        assert_eq!(poset.elements, vec![(1, 1), (1, 2), (2, 2)]);
        let g = lambda_diagram(&x, (1, 2)).unwrap();
        assert!(lambda_diagram_valid(&x, &g));

        // γ avoids t and t+1 entirely but the fiber over t is present
        let xi = d(2, 1, &[0, 1, 1]);
        let alpha = d(1, 2, &[0, 2]);
        let gamma = d(1, 2, &[0, 2]);
        let x = LambdaData::new(gamma, 1, alpha, xi).unwrap();
        let poset = lambda_x_poset(&x).unwrap();
        assert_eq!(poset.formula, (1, 2));
        assert_eq!(poset.minimum, Some((1, 2)));

        // γ stays strictly below t: empty
        let xi = d(0, 1, &[0]);
        let x = LambdaData::new(d(0, 2, &[0]), 1, DeltaMorphism::identity(0), xi).unwrap();
        assert_eq!(lambda_x_poset(&x), Err(CombinatError::EmptyPoset));
    }

    #[test]
    fn lambda_diagram_boundary() {
        // γ = (t+1) out of [0]: the poset has (0,0) but no active π : [0] → [1]
        let x = LambdaData::new(d(0, 1, &[1]), 0, DeltaMorphism::identity(0), d(0, 0, &[0])).unwrap();
        assert!(!lambda_diagram_defined(&x));
        assert_eq!(lambda_x_poset(&x).unwrap().elements, vec![(0, 0)]);
        assert!(!lambda_diagram_valid(&x, &lambda_diagram(&x, (0, 0)).unwrap()));
    }

    #[test]
    fn lambda_small_sweep() {
        let t = check_lambda_all(2, 3);
        assert!(t.ok(), "{:?}", t.witnesses);
    }

    #[test]
    fn sift_examples() {
        assert_eq!(sift_sequence(0, &[]), vec![0, 1]);
        assert_eq!(sift_sequence(2, &[0]), vec![2, 3, 4]);
        assert_eq!(sift_sequence(1, &[1, 0]), vec![1, 2, 2, 3, 4]);
        let (report, t) = check_sift(0, 2, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(t.ok(), "{:?}", t.witnesses);
        let (report, t) = check_sift(1, 1, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(t.ok());
    }

    #[test]
    fn injective_cellular_example() {
        let phi = d(1, 2, &[0, 2]);
        for gamma in enumerate_morphisms(1, 1, Budget::default()).unwrap() {
            let (report, t) = check_injective_cellular(&phi, &gamma, 3).unwrap();
            assert_eq!(report.verdict, Verdict::Pass);
            assert!(t.ok(), "{:?}", t.witnesses);
        }
    }

    #[test]
    fn u_rule_examples() {
        // constant sources always kept
        assert!(u_keeps(&[0, 0], &[0, 0, 0], &[0, 2]));
        assert!(u_keeps(&[1], &[0, 1], &[1]));
        // (0,1) → (0,0,1) over d₁ hits 1 and 2 across the transition
        assert!(u_keeps(&[0, 1], &[0, 0, 1], &[1, 2]));
        // skipping the transition is dropped
        assert!(!u_keeps(&[0, 1], &[0, 0, 1], &[0, 2]));
        // the action map (0,1) → (0,0,1) along d₂ goes through an old 0
        assert!(!u_keeps(&[0, 1], &[0, 1, 1], &[0, 2]));
    }

    #[test]
    fn u_small() {
        let u = build_u_category(2).unwrap();
        assert!(u.objects().iter().all(|o| u.find_arrow(u.find(o).unwrap(), u.find(o).unwrap(), &DeltaNMorphism::identity(&o.shape())).is_some()));
        let t = check_u(3).unwrap();
        assert!(t.ok(), "{:?}", t.witnesses);
    }
}
