//! Bimodules over pairs of algebras, relative tensor products as
//! coequalizers of the two lowest bar faces, and isomorphism search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{bilinear_from_gens, ground_algebra, Algebra, AlgebraMap};
use crate::error::{AlgebraError, Result};
use crate::lattice::{gcd, index_mod};
use crate::module::{coequalizer, Bilinear, Elem, FpModule, LinearMap, MultiTensor};

#[derive(Clone, Debug)]
pub struct Bimodule {
    name: String,
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    module: FpModule,
    lact: Bilinear,
    ract: Bilinear,
}

impl fmt::Display for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over ({}, {})", self.name, self.left, self.right)
    }
}

impl Bimodule {
    /// Checks both actions for well-definedness, units, associativity and
    /// that they commute, all on basis elements.
    pub fn new(name: impl Into<String>, left: Arc<Algebra>, right: Arc<Algebra>, module: FpModule, lact: Bilinear, ract: Bilinear) -> Result<Self> {
        let name = name.into();
        if left.ground() != module.ground() || right.ground() != module.ground() {
            return Err(AlgebraError::GroundMismatch);
        }
        if !lact.is_well_defined(left.module(), &module, &module) || !ract.is_well_defined(&module, right.module(), &module) {
            return Err(AlgebraError::NotWellDefined(format!("actions on {name}")));
        }
        let b = Bimodule { name, left, right, module, lact, ract };
        b.check_axioms()?;
        Ok(b)
    }

    /// Actions given on generators: `ltable[a][m]` and `rtable[m][b]` are
    /// generator coordinates in the module.
    pub fn from_gens(
        name: impl Into<String>,
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        module: FpModule,
        ltable: &[Vec<Vec<i64>>],
        rtable: &[Vec<Vec<i64>>],
    ) -> Result<Self> {
        let lact = bilinear_from_gens(left.module(), &module, &module, ltable)?;
        let ract = bilinear_from_gens(&module, right.module(), &module, rtable)?;
        Self::new(name, left, right, module, lact, ract)
    }

    fn check_axioms(&self) -> Result<()> {
        let (a, b) = (self.left.basis(), self.right.basis());
        let ms = self.basis();
        let fail = |what: &str, m: &Elem| Err(AlgebraError::Axiom(format!("{}: {what} fails at {m:?}", self.name)));
        for m in &ms {
            if &self.act_left(self.left.unit(), m) != m {
                return fail("left unit", m);
            }
            if &self.act_right(m, self.right.unit()) != m {
                return fail("right unit", m);
            }
            for x in &a {
                let xm = self.act_left(x, m);
                for y in &a {
                    if self.act_left(&self.left.mul(y, x), m) != self.act_left(y, &xm) {
                        return fail("left associativity", m);
                    }
                }
                for z in &b {
                    if self.act_right(&xm, z) != self.act_left(x, &self.act_right(m, z)) {
                        return fail("compatibility of the actions", m);
                    }
                }
            }
            for z in &b {
                let mz = self.act_right(m, z);
                for w in &b {
                    if self.act_right(m, &self.right.mul(z, w)) != self.act_right(&mz, w) {
                        return fail("right associativity", m);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn left(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn module(&self) -> &FpModule {
        &self.module
    }

    pub fn left_action(&self) -> &Bilinear {
        &self.lact
    }

    pub fn right_action(&self) -> &Bilinear {
        &self.ract
    }

    pub fn basis(&self) -> Vec<Elem> {
        (0..self.module.rank()).map(|i| self.module.basis_elem(i)).collect()
    }

    pub fn act_left(&self, a: &Elem, m: &Elem) -> Elem {
        self.lact.apply(&self.module, a, m)
    }

    pub fn act_right(&self, m: &Elem, b: &Elem) -> Elem {
        self.ract.apply(&self.module, m, b)
    }

    /// `A` over `(A, A)`.
    pub fn regular(a: &Arc<Algebra>) -> Self {
        let m = a.mult().clone();
        Bimodule::new(a.name(), a.clone(), a.clone(), a.module().clone(), m.clone(), m).expect("regular bimodule")
    }

    /// `A` over `(A, k)`.
    pub fn left_regular(a: &Arc<Algebra>) -> Self {
        Bimodule::restrict(&Bimodule::regular(a), &AlgebraMap::identity(a), &AlgebraMap::unit_map(a).expect("unit map")).expect("restriction")
    }

    /// `A` over `(k, A)`.
    pub fn right_regular(a: &Arc<Algebra>) -> Self {
        Bimodule::restrict(&Bimodule::regular(a), &AlgebraMap::unit_map(a).expect("unit map"), &AlgebraMap::identity(a)).expect("restriction")
    }

    /// A ground module over `(k, k)` with both actions the ground action.
    pub fn scalar(x: &FpModule) -> Self {
        let k = ground_algebra(x.ground());
        let xb: Vec<Elem> = (0..x.rank()).map(|j| x.basis_elem(j)).collect();
        let lact = Bilinear { table: vec![xb.clone(); k.module().rank()] };
        let ract = Bilinear { table: xb.iter().map(|e| vec![e.clone(); k.module().rank()]).collect() };
        Bimodule::new(x.describe(), k.clone(), k, x.clone(), lact, ract).expect("scalar bimodule")
    }

    /// Column vectors `kⁿ` over `(Mₙ(k), k)`.
    pub fn column_vectors(mn: &Arc<Algebra>, n: usize) -> Result<Self> {
        let x = FpModule::free(mn.ground(), n)?;
        let k = ground_algebra(mn.ground());
        let ltable: Vec<Vec<Vec<i64>>> = (0..n * n)
            .map(|a| (0..n).map(|l| (0..n).map(|i| i64::from(a % n == l && a / n == i)).collect()).collect())
            .collect();
        let rtable: Vec<Vec<Vec<i64>>> = (0..n).map(|l| vec![(0..n).map(|i| i64::from(i == l)).collect()]).collect();
        Bimodule::from_gens(format!("k{n} columns"), mn.clone(), k, x, &ltable, &rtable)
    }

    /// Row vectors `kⁿ` over `(k, Mₙ(k))`.
    pub fn row_vectors(mn: &Arc<Algebra>, n: usize) -> Result<Self> {
        let x = FpModule::free(mn.ground(), n)?;
        let k = ground_algebra(mn.ground());
        let ltable: Vec<Vec<Vec<i64>>> = vec![(0..n).map(|l| (0..n).map(|i| i64::from(i == l)).collect()).collect()];
        let rtable: Vec<Vec<Vec<i64>>> = (0..n)
            .map(|l| (0..n * n).map(|a| (0..n).map(|j| i64::from(a / n == l && a % n == j)).collect()).collect())
            .collect();
        Bimodule::from_gens(format!("k{n} rows"), k, mn.clone(), x, &ltable, &rtable)
    }

    /// The `(A', B')`-bimodule obtained along `f: A' → A` and `g: B' → B`.
    pub fn restrict(m: &Bimodule, f: &AlgebraMap, g: &AlgebraMap) -> Result<Self> {
        if *f.tgt != *m.left || *g.tgt != *m.right {
            return Err(AlgebraError::Incompatible(format!("restricting {m} along {} → {}, {} → {}", f.src, f.tgt, g.src, g.tgt)));
        }
        let ms = m.basis();
        let lact = Bilinear { table: f.src.basis().iter().map(|a| ms.iter().map(|x| m.act_left(&f.apply(a), x)).collect()).collect() };
        let ract = Bilinear { table: ms.iter().map(|x| g.src.basis().iter().map(|b| m.act_right(x, &g.apply(b))).collect()).collect() };
        Bimodule::new(m.name.clone(), f.src.clone(), g.src.clone(), m.module.clone(), lact, ract)
    }

    pub fn direct_sum(m: &Bimodule, n: &Bimodule) -> Result<Self> {
        if *m.left != *n.left || *m.right != *n.right {
            return Err(AlgebraError::Incompatible(format!("direct sum of {m} and {n}")));
        }
        let module = m.module.direct_sum(&n.module)?;
        let (rm, rn) = (m.module.rank(), n.module.rank());
        let join = |x: Elem, y: Elem| -> Elem { x.into_iter().chain(y).collect() };
        let left_of = |x: &Elem| join(x.clone(), n.module.zero_elem());
        let right_of = |y: &Elem| join(m.module.zero_elem(), y.clone());
        let lact = Bilinear {
            table: m
                .left
                .basis()
                .iter()
                .map(|a| (0..rm).map(|i| left_of(&m.act_left(a, &m.module.basis_elem(i)))).chain((0..rn).map(|j| right_of(&n.act_left(a, &n.module.basis_elem(j))))).collect())
                .collect(),
        };
        let ract = Bilinear {
            table: (0..rm)
                .map(|i| m.right.basis().iter().map(|b| left_of(&m.act_right(&m.module.basis_elem(i), b))).collect())
                .chain((0..rn).map(|j| m.right.basis().iter().map(|b| right_of(&n.act_right(&n.module.basis_elem(j), b))).collect()))
                .collect(),
        };
        Bimodule::new(format!("{} ⊕ {}", m.name, n.name), m.left.clone(), m.right.clone(), module, lact, ract)
    }

    /// Same underlying data, compared structurally.
    pub fn same_data(&self, other: &Bimodule) -> bool {
        *self.left == *other.left && *self.right == *other.right && self.module == other.module && self.lact == other.lact && self.ract == other.ract
    }
}

/// `M ⊗_B N` together with the data to move between pure tensors and the
/// quotient.
#[derive(Clone, Debug)]
pub struct RelTensor {
    pub bimodule: Bimodule,
    pair: MultiTensor,
    left_basis: Vec<Elem>,
    right_basis: Vec<Elem>,
}

impl RelTensor {
    /// The class of `m ⊗ n`.
    pub fn pure(&self, m: &Elem, n: &Elem) -> Elem {
        self.bimodule.module.from_gens(&self.pair.module.reduce(self.pair.pure(&[m, n])))
    }

    /// Writes an element as `Σ c·(mᵢ ⊗ nⱼ)` over the factors' cyclic bases.
    pub fn expand(&self, x: &Elem) -> Vec<(i64, usize, usize)> {
        let rep = self.pair.module.reduce(self.bimodule.module.to_gens(x));
        self.pair.expand(&rep).into_iter().map(|(c, idx)| (c, idx[0], idx[1])).collect()
    }

    pub fn left_basis(&self) -> &[Elem] {
        &self.left_basis
    }

    pub fn right_basis(&self) -> &[Elem] {
        &self.right_basis
    }
}

/// `M ⊗_B N`: the ground tensor modulo `mb ⊗ n − m ⊗ bn`, with the outer
/// actions it inherits.
pub fn relative_tensor(m: &Bimodule, n: &Bimodule) -> Result<RelTensor> {
    if *m.right != *n.left {
        return Err(AlgebraError::MiddleMismatch { left: m.right.name().into(), right: n.left.name().into() });
    }
    let pair = MultiTensor::new(&[&m.module, &n.module])?;
    let (mb, nb, bb) = (m.basis(), n.basis(), m.right.basis());
    let mut rels = Vec::new();
    for x in &mb {
        for b in &bb {
            let xb = m.act_right(x, b);
            for y in &nb {
                let by = n.act_left(b, y);
                rels.push(pair.module.sub(&pair.pure(&[&xb, y]), &pair.pure(&[x, &by])));
            }
        }
    }
    let q = pair.module.quotient(&rels)?;
    let mut out = RelTensor {
        bimodule: Bimodule {
            name: format!("{}⊗{}", m.name, n.name),
            left: m.left.clone(),
            right: n.right.clone(),
            module: q,
            lact: Bilinear { table: Vec::new() },
            ract: Bilinear { table: Vec::new() },
        },
        pair,
        left_basis: mb,
        right_basis: nb,
    };
    let qb = out.bimodule.basis();
    let lact = Bilinear {
        table: m
            .left
            .basis()
            .iter()
            .map(|a| qb.iter().map(|x| sum_pure(&out, x, |i, j| (m.act_left(a, &out.left_basis[i]), out.right_basis[j].clone()))).collect())
            .collect(),
    };
    let ract = Bilinear {
        table: qb
            .iter()
            .map(|x| n.right.basis().iter().map(|c| sum_pure(&out, x, |i, j| (out.left_basis[i].clone(), n.act_right(&out.right_basis[j], c)))).collect())
            .collect(),
    };
    let b = out.bimodule;
    out.bimodule = Bimodule::new(b.name, b.left, b.right, b.module, lact, ract)?;
    Ok(out)
}

fn sum_pure(t: &RelTensor, x: &Elem, f: impl Fn(usize, usize) -> (Elem, Elem)) -> Elem {
    let q = &t.bimodule.module;
    let terms: Vec<(i64, Elem)> = t
        .expand(x)
        .into_iter()
        .map(|(c, i, j)| {
            let (u, v) = f(i, j);
            (c, t.pure(&u, &v))
        })
        .collect();
    q.combine(terms.iter().map(|(c, e)| (*c, e)))
}

/// `A ⊗ X ⊗ B` with the outer regular actions, and the unit `x ↦ 1⊗x⊗1`.
pub fn free_bimodule(a: &Arc<Algebra>, x: &FpModule, b: &Arc<Algebra>) -> Result<(Bimodule, LinearMap)> {
    if a.ground() != x.ground() || b.ground() != x.ground() {
        return Err(AlgebraError::GroundMismatch);
    }
    let t = MultiTensor::new(&[a.module(), x, b.module()])?;
    let (ab, xb, bb) = (a.basis(), (0..x.rank()).map(|i| x.basis_elem(i)).collect::<Vec<_>>(), b.basis());
    let tb: Vec<Elem> = (0..t.module.rank()).map(|i| t.module.basis_elem(i)).collect();
    let image = |e: &Elem, f: &dyn Fn(&[usize]) -> [Elem; 3]| -> Elem {
        let terms: Vec<(i64, Elem)> = t
            .expand(e)
            .into_iter()
            .map(|(c, idx)| {
                let [u, v, w] = f(&idx);
                (c, t.pure(&[&u, &v, &w]))
            })
            .collect();
        t.module.combine(terms.iter().map(|(c, e)| (*c, e)))
    };
    let lact = Bilinear {
        table: ab.iter().map(|p| tb.iter().map(|e| image(e, &|i| [a.mul(p, &ab[i[0]]), xb[i[1]].clone(), bb[i[2]].clone()])).collect()).collect(),
    };
    let ract = Bilinear {
        table: tb.iter().map(|e| bb.iter().map(|q| image(e, &|i| [ab[i[0]].clone(), xb[i[1]].clone(), b.mul(&bb[i[2]], q)])).collect()).collect(),
    };
    let unit = LinearMap { images: xb.iter().map(|v| t.pure(&[a.unit(), v, b.unit()])).collect() };
    let m = Bimodule::new(format!("{a}⊗{}⊗{b}", x.describe()), a.clone(), b.clone(), t.module.clone(), lact, ract)?;
    Ok((m, unit))
}

/// `A′ ⊗_A M ⊗_B B′` along unital maps `f: A → A′` and `g: B → B′`.
pub fn pushforward(f: &AlgebraMap, g: &AlgebraMap, m: &Bimodule) -> Result<Bimodule> {
    if *f.src != *m.left || *g.src != *m.right {
        return Err(AlgebraError::Incompatible(format!("pushing {m} along {} → {}, {} → {}", f.src, f.tgt, g.src, g.tgt)));
    }
    let a2 = Bimodule::restrict(&Bimodule::regular(&f.tgt), &AlgebraMap::identity(&f.tgt), f)?;
    let b2 = Bimodule::restrict(&Bimodule::regular(&g.tgt), g, &AlgebraMap::identity(&g.tgt))?;
    let first = relative_tensor(&a2, m)?;
    Ok(relative_tensor(&first.bimodule, &b2)?.bimodule.renamed(format!("({},{})!{}", f.tgt, g.tgt, m.name)))
}

/// One level `M ⊗ A^{⊗p} ⊗ N` of the bar construction.
#[derive(Clone, Debug)]
pub struct BarLevel {
    pub level: usize,
    pub tensor: MultiTensor,
    /// `d_0, …, d_p` into the level below
    pub faces: Vec<LinearMap>,
    /// `s_0, …, s_p` into the level above, when that level is stored
    pub degeneracies: Vec<LinearMap>,
}

impl BarLevel {
    pub fn carrier(&self) -> &FpModule {
        &self.tensor.module
    }
}

pub fn bar_complex(m: &Bimodule, n: &Bimodule, levels: usize) -> Result<Vec<BarLevel>> {
    if levels == 0 {
        return Err(AlgebraError::Shape("at least one level".into()));
    }
    if *m.right != *n.left {
        return Err(AlgebraError::MiddleMismatch { left: m.right.name().into(), right: n.left.name().into() });
    }
    let a = &m.right;
    let (mb, ab, nb) = (m.basis(), a.basis(), n.basis());
    let tensors: Vec<MultiTensor> = (0..=levels)
        .map(|p| {
            let mut f = vec![m.module()];
            f.extend(std::iter::repeat_n(a.module(), p));
            f.push(n.module());
            MultiTensor::new(&f)
        })
        .collect::<Result<_>>()?;
    // a pure tensor of basis indices as a list of elements
    let elems = |idx: &[usize]| -> Vec<Elem> {
        let p = idx.len() - 2;
        std::iter::once(mb[idx[0]].clone()).chain(idx[1..=p].iter().map(|&i| ab[i].clone())).chain(std::iter::once(nb[idx[p + 1]].clone())).collect()
    };
    let induced = |src: &MultiTensor, tgt: &MultiTensor, op: &dyn Fn(Vec<Elem>) -> Vec<Elem>| -> LinearMap {
        let images = (0..src.module.rank())
            .map(|b| {
                let terms: Vec<(i64, Elem)> = src
                    .expand(&src.module.basis_elem(b))
                    .into_iter()
                    .map(|(c, idx)| {
                        let v = op(elems(&idx));
                        (c, tgt.pure(&v.iter().collect::<Vec<_>>()))
                    })
                    .collect();
                tgt.module.combine(terms.iter().map(|(c, e)| (*c, e)))
            })
            .collect();
        LinearMap { images }
    };
    let mut out = Vec::new();
    for p in 0..=levels {
        let faces = if p == 0 {
            Vec::new()
        } else {
            (0..=p)
                .map(|i| {
                    induced(&tensors[p], &tensors[p - 1], &|mut v: Vec<Elem>| {
                        let merged = match i {
                            0 => m.act_right(&v[0], &v[1]),
                            i if i == p => n.act_left(&v[p], &v[p + 1]),
                            i => a.mul(&v[i], &v[i + 1]),
                        };
                        v[i] = merged;
                        v.remove(i + 1);
                        v
                    })
                })
                .collect()
        };
        let degeneracies = if p == levels {
            Vec::new()
        } else {
            (0..=p)
                .map(|i| {
                    induced(&tensors[p], &tensors[p + 1], &|mut v: Vec<Elem>| {
                        v.insert(i + 1, a.unit().clone());
                        v
                    })
                })
                .collect()
        };
        out.push(BarLevel { level: p, tensor: tensors[p].clone(), faces, degeneracies });
    }
    let t = check_simplicial_identities(&out)?;
    if t.failed > 0 {
        return Err(AlgebraError::Axiom(format!("simplicial identities: {}", t.witnesses.join("; "))));
    }
    Ok(out)
}

/// Every simplicial identity on the generators of every stored level, after
/// checking each face and degeneracy is well defined; both sides are linear,
/// so agreement on generators is agreement everywhere.
pub fn check_simplicial_identities(levels: &[BarLevel]) -> Result<ncat_combinat::Tally> {
    let mut t = ncat_combinat::Tally::new();
    let carrier = |p: usize| &levels[p].tensor.module;
    let d = |p: usize, i: usize, x: &Elem| levels[p].faces[i].apply(carrier(p - 1), x);
    let s = |p: usize, i: usize, x: &Elem| levels[p].degeneracies[i].apply(carrier(p + 1), x);
    for (p, level) in levels.iter().enumerate() {
        for (i, f) in level.faces.iter().enumerate() {
            t.record(f.is_well_defined(carrier(p), carrier(p - 1)), || format!("d{i} at level {p} is not well defined"));
        }
        for (i, f) in level.degeneracies.iter().enumerate() {
            t.record(f.is_well_defined(carrier(p), carrier(p + 1)), || format!("s{i} at level {p} is not well defined"));
        }
    }
    for p in 0..levels.len() {
        for x in (0..carrier(p).rank()).map(|g| carrier(p).basis_elem(g)) {
            if p >= 2 {
                for j in 0..=p {
                    for i in 0..j {
                        t.record(d(p - 1, i, &d(p, j, &x)) == d(p - 1, j - 1, &d(p, i, &x)), || format!("d{i}d{j} at level {p} on {x:?}"));
                    }
                }
            }
            if p + 1 < levels.len() {
                for j in 0..=p {
                    let sx = s(p, j, &x);
                    for i in 0..=p + 1 {
                        let lhs = d(p + 1, i, &sx);
                        let rhs = match i {
                            i if i < j => s(p - 1, j - 1, &d(p, i, &x)),
                            i if i == j || i == j + 1 => x.clone(),
                            i => s(p - 1, j, &d(p, i - 1, &x)),
                        };
                        t.record(lhs == rhs, || format!("d{i}s{j} at level {p} on {x:?}"));
                    }
                }
            }
            if p + 2 < levels.len() {
                for j in 0..=p {
                    for i in 0..=j {
                        t.record(s(p + 1, i, &s(p, j, &x)) == s(p + 1, j + 1, &s(p, i, &x)), || format!("s{i}s{j} at level {p} on {x:?}"));
                    }
                }
            }
        }
    }
    Ok(t)
}

/// Well defined, equivariant on basis elements and bijective.
pub fn is_bimodule_iso(m: &Bimodule, n: &Bimodule, f: &LinearMap) -> Result<bool> {
    if *m.left != *n.left || *m.right != *n.right || !f.is_well_defined(&m.module, &n.module) {
        return Ok(false);
    }
    let (ab, bb) = (m.left.basis(), m.right.basis());
    let equivariant = m.basis().iter().all(|x| {
        let fx = f.apply(&n.module, x);
        ab.iter().all(|a| f.apply(&n.module, &m.act_left(a, x)) == n.act_left(a, &fx))
            && bb.iter().all(|b| f.apply(&n.module, &m.act_right(x, b)) == n.act_right(&fx, b))
    });
    Ok(equivariant && f.is_bijective(&m.module, &n.module)?)
}

/// `(L ⊗ M) ⊗ N → L ⊗ (M ⊗ N)` on pure tensors.
#[derive(Clone, Debug)]
pub struct Associator {
    pub left: Bimodule,
    pub right: Bimodule,
    pub map: LinearMap,
}

pub fn associator(l: &Bimodule, m: &Bimodule, n: &Bimodule) -> Result<Associator> {
    let lm = relative_tensor(l, m)?;
    let lm_n = relative_tensor(&lm.bimodule, n)?;
    let mn = relative_tensor(m, n)?;
    let l_mn = relative_tensor(l, &mn.bimodule)?;
    let tgt = &l_mn.bimodule.module;
    let images = lm_n
        .bimodule
        .basis()
        .iter()
        .map(|x| {
            let terms: Vec<(i64, Elem)> = lm_n
                .expand(x)
                .into_iter()
                .flat_map(|(c, i, j)| {
                    let z = &lm_n.right_basis[j];
                    lm.expand(&lm_n.left_basis[i]).into_iter().map(|(c2, p, q)| (c * c2, l_mn.pure(&lm.left_basis[p], &mn.pure(&lm.right_basis[q], z)))).collect::<Vec<_>>()
                })
                .collect();
            tgt.combine(terms.iter().map(|(c, e)| (*c, e)))
        })
        .collect();
    Ok(Associator { left: lm_n.bimodule, right: l_mn.bimodule, map: LinearMap { images } })
}

/// `π₀` of the bar construction: the coequalizer of `d₀, d₁` out of level 1.
pub fn bar_coequalizer(levels: &[BarLevel]) -> Result<FpModule> {
    let one = levels.get(1).ok_or_else(|| AlgebraError::Shape("level 1 missing".into()))?;
    Ok(coequalizer(&one.faces[0], &one.faces[1], &levels[0].tensor.module)?.0)
}

/// Sizes `|Q/dQ|` for every divisor `d > 1` of `e`; they determine a finite
/// abelian group killed by `e`.
pub fn profile_of(m: &FpModule, e: u64) -> Vec<(u64, u128)> {
    divisors(e).into_iter().map(|d| (d, m.torsion_count(d))).collect()
}

fn divisors(e: u64) -> Vec<u64> {
    (2..=e).filter(|d| e.is_multiple_of(*d)).collect()
}

/// The free abelian group on pairs `(m, n)` of elements modulo additivity in
/// each slot and `(mb, n) ~ (m, bn)`, computed by brute force from element
/// tables; returns its profile in the sense of [`profile_of`].
pub fn table_tensor_profile(m: &Bimodule, n: &Bimodule) -> Result<(u64, Vec<(u64, u128)>)> {
    if *m.right != *n.left {
        return Err(AlgebraError::MiddleMismatch { left: m.right.name().into(), right: n.left.name().into() });
    }
    let e = match (m.module.exponent(), n.module.exponent()) {
        (Some(x), Some(y)) => gcd(x, y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return Err(AlgebraError::Infinite),
    };
    let (em, en) = (m.module.elements()?, n.module.elements()?);
    let cols = em.len() * en.len();
    let at = |x: &Elem, y: &Elem| m.module.index_of(x) * en.len() + n.module.index_of(y);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut push = |terms: [(usize, i64); 3]| {
        let mut r = vec![0i64; cols];
        for (c, v) in terms {
            r[c] += v;
        }
        if r.iter().any(|&v| v != 0) {
            rows.push(r);
        }
    };
    for x in &em {
        for y in &en {
            for g in m.basis() {
                push([(at(&m.module.add(x, &g), y), 1), (at(x, y), -1), (at(&g, y), -1)]);
            }
            for h in n.basis() {
                push([(at(x, &n.module.add(y, &h)), 1), (at(x, y), -1), (at(x, &h), -1)]);
            }
            for b in m.right.basis() {
                push([(at(&m.act_right(x, &b), y), 1), (at(x, &n.act_left(&b, y)), -1), (0, 0)]);
            }
        }
    }
    let prof = divisors(e).into_iter().map(|d| (d, index_mod(rows.iter().cloned(), cols, d))).collect();
    Ok((e, prof))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IsoOutcome {
    /// the images of the source's cyclic basis
    Iso(Vec<Elem>),
    NotIso(String),
    Inconclusive(String),
}

impl IsoOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Iso(_))
    }
}

pub const DEFAULT_ISO_CUTOFF: u128 = 1 << 16;

/// Words `a_p · g · b_q` spanning the sub-bimodule generated by `g`.
fn words(m: &Bimodule, g: &Elem) -> Vec<Elem> {
    let (ab, bb) = (m.left.basis(), m.right.basis());
    ab.iter().flat_map(|a| bb.iter().map(|b| m.act_right(&m.act_left(a, g), b))).collect()
}

/// Breadth-first span of `words`; each reached element remembers the word
/// counts that produce it.
fn span(m: &FpModule, words: &[Elem]) -> HashMap<Elem, Vec<i64>> {
    let mut seen = HashMap::new();
    seen.insert(m.zero_elem(), vec![0; words.len()]);
    let mut queue = VecDeque::from([m.zero_elem()]);
    while let Some(x) = queue.pop_front() {
        let cx = seen[&x].clone();
        for (w, word) in words.iter().enumerate() {
            let y = m.add(&x, word);
            if !seen.contains_key(&y) {
                let mut cy = cx.clone();
                cy[w] += 1;
                seen.insert(y.clone(), cy);
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Modules up to this size are searched element by element rather than
/// only along their cyclic basis.
const FULL_SEARCH: u128 = 1 << 10;

/// A small generating set, picked greedily by the size of what it adds.
pub fn bimodule_generators(m: &Bimodule) -> Result<Vec<Elem>> {
    let size = m.module.size().ok_or(AlgebraError::Infinite)?;
    let pool = if size <= FULL_SEARCH { m.module.elements()? } else { m.basis() };
    let mut gens: Vec<Elem> = Vec::new();
    let mut cur: Vec<Elem> = Vec::new();
    let mut reached = 1;
    while reached < size as usize {
        let best = pool
            .iter()
            .map(|g| {
                let mut w = cur.clone();
                w.extend(words(m, g));
                (span(&m.module, &w).len(), g)
            })
            .max_by_key(|(n, _)| *n)
            .expect("nonzero module has elements");
        reached = best.0;
        cur.extend(words(m, best.1));
        gens.push(best.1.clone());
    }
    Ok(gens)
}

/// Searches for an isomorphism of bimodules by choosing images of a
/// generating set; exhaustive unless the candidate count exceeds `cutoff`.
pub fn iso_check(m: &Bimodule, n: &Bimodule, cutoff: u128) -> Result<IsoOutcome> {
    if *m.left != *n.left || *m.right != *n.right {
        return Err(AlgebraError::Incompatible(format!("comparing {m} with {n}")));
    }
    if !m.module.is_isomorphic(&n.module) {
        return Ok(IsoOutcome::NotIso(format!("underlying modules differ: {} vs {}", m.module.describe(), n.module.describe())));
    }
    let gens = bimodule_generators(m)?;
    let word_lists: Vec<Vec<Elem>> = gens.iter().map(|g| words(m, g)).collect();
    let all_words: Vec<Elem> = word_lists.concat();
    let expr = span(&m.module, &all_words);
    let basis = m.basis();
    let coeffs: Vec<&Vec<i64>> = basis.iter().map(|e| &expr[e]).collect();
    let en = n.module.elements()?;
    // an image generates a sub-bimodule of the same size
    let small = n.module.size().is_some_and(|s| s <= FULL_SEARCH);
    let reach = |b: &Bimodule, y: &Elem| span(&b.module, &words(b, y)).len();
    let cands: Vec<Vec<&Elem>> = gens
        .iter()
        .map(|g| {
            let want = small.then(|| reach(m, g));
            en.iter().filter(|y| n.module.order_of(y) == m.module.order_of(g) && want.is_none_or(|w| reach(n, y) == w)).collect()
        })
        .collect();
    let total: u128 = cands.iter().map(|c| c.len() as u128).product();
    if total > cutoff {
        return Ok(IsoOutcome::Inconclusive(format!("{total} candidate generator images exceed the cutoff {cutoff}")));
    }
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(IsoOutcome::NotIso("a generator has no image of the same order".into()));
    }
    let (ab, bb) = (m.left.basis(), m.right.basis());
    let mut pick = vec![0usize; gens.len()];
    'search: loop {
        let imgs: Vec<Elem> = pick.iter().zip(&cands).flat_map(|(&i, c)| words(n, c[i])).collect();
        let f = LinearMap { images: coeffs.iter().map(|c| n.module.combine(c.iter().copied().zip(&imgs))).collect() };
        let ok = f.is_well_defined(&m.module, &n.module)
            && gens.iter().zip(pick.iter().zip(&cands)).all(|(g, (&i, c))| f.apply(&n.module, g) == *c[i])
            && basis.iter().all(|x| {
                let fx = f.apply(&n.module, x);
                ab.iter().all(|a| f.apply(&n.module, &m.act_left(a, x)) == n.act_left(a, &fx))
                    && bb.iter().all(|b| f.apply(&n.module, &m.act_right(x, b)) == n.act_right(&fx, b))
            })
            && f.is_bijective(&m.module, &n.module)?;
        if ok {
            return Ok(IsoOutcome::Iso(f.images));
        }
        for (k, p) in pick.iter_mut().enumerate() {
            *p += 1;
            if *p < cands[k].len() {
                continue 'search;
            }
            *p = 0;
        }
        return Ok(IsoOutcome::NotIso(format!("no equivariant bijection among {total} choices of generator images")));
    }
}

/// Module-level comparison by invariant factors.
pub fn module_iso(m: &FpModule, n: &FpModule) -> bool {
    m.is_isomorphic(n)
}

/// Distinct elements hit by a map, used as a cheap injectivity witness.
pub fn image_size(f: &LinearMap, src: &FpModule, tgt: &FpModule) -> Result<usize> {
    Ok(src.elements()?.iter().map(|x| f.apply(tgt, x)).collect::<HashSet<_>>().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_ring, matrix_algebra, product_algebra, truncated_polynomials};
    use crate::module::GroundRing;

    const K2: GroundRing = GroundRing::IntegersMod(2);

    fn iso(m: &Bimodule, n: &Bimodule) -> bool {
        iso_check(m, n, DEFAULT_ISO_CUTOFF).unwrap().is_iso()
    }

    #[test]
    fn tensor_over_integers() {
        let z = ground_algebra(GroundRing::Integers);
        let z2 = Bimodule::scalar(&FpModule::cyclic(GroundRing::Integers, &[2]).unwrap());
        let z3 = Bimodule::scalar(&FpModule::cyclic(GroundRing::Integers, &[3]).unwrap());
        assert_eq!(*z2.right(), z);
        assert_eq!(relative_tensor(&z2, &z3).unwrap().bimodule.module().size(), Some(1));
        let z4 = Bimodule::scalar(&FpModule::cyclic(GroundRing::Integers, &[4]).unwrap());
        let z6 = Bimodule::scalar(&FpModule::cyclic(GroundRing::Integers, &[6]).unwrap());
        let t = relative_tensor(&z4, &z6).unwrap();
        assert_eq!(t.bimodule.module().invariant_factors(), vec![2]);
        let (e, prof) = table_tensor_profile(&z4, &z6).unwrap();
        assert_eq!(prof, profile_of(t.bimodule.module(), e));
    }

    #[test]
    fn morita_context() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let col = Bimodule::column_vectors(&m2, 2).unwrap();
        let row = Bimodule::row_vectors(&m2, 2).unwrap();
        let pq = relative_tensor(&col, &row).unwrap().bimodule;
        assert_eq!(pq.module().size(), Some(16));
        assert!(iso(&pq, &Bimodule::regular(&m2)));
        let qp = relative_tensor(&row, &col).unwrap().bimodule;
        assert!(iso(&qp, &Bimodule::regular(&k)));
    }

    #[test]
    fn units_and_mismatch() {
        let d = Arc::new(truncated_polynomials(K2, 2).unwrap());
        let reg = Bimodule::regular(&d);
        let t = relative_tensor(&reg, &reg).unwrap().bimodule;
        assert!(iso(&t, &reg));
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let col = Bimodule::column_vectors(&m2, 2).unwrap();
        assert!(matches!(relative_tensor(&reg, &col), Err(AlgebraError::MiddleMismatch { .. })));
        let p = pushforward(&AlgebraMap::identity(&d), &AlgebraMap::identity(&d), &reg).unwrap();
        assert!(iso(&p, &reg));
    }

    #[test]
    fn iso_negative() {
        let z4 = ground_algebra(GroundRing::IntegersMod(4));
        let a = Bimodule::scalar(&FpModule::cyclic(GroundRing::IntegersMod(4), &[2, 2]).unwrap());
        let b = Bimodule::scalar(&FpModule::cyclic(GroundRing::IntegersMod(4), &[4]).unwrap());
        assert_eq!(*a.left(), z4);
        assert!(matches!(iso_check(&a, &b, DEFAULT_ISO_CUTOFF).unwrap(), IsoOutcome::NotIso(_)));
        // same size, different action: k×k with the swapped right action
        let kk = Arc::new(product_algebra(K2, 2).unwrap());
        let reg = Bimodule::regular(&kk);
        let swap = AlgebraMap::from_gens(kk.clone(), kk.clone(), &[vec![0, 1], vec![1, 0]]).unwrap();
        let twisted = Bimodule::restrict(&reg, &AlgebraMap::identity(&kk), &swap).unwrap();
        assert!(matches!(iso_check(&reg, &twisted, DEFAULT_ISO_CUTOFF).unwrap(), IsoOutcome::NotIso(_)));
        assert!(matches!(iso_check(&reg, &twisted, 0).unwrap(), IsoOutcome::Inconclusive(_)));
    }

    #[test]
    fn free_bimodule_sizes() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let x = FpModule::free(K2, 1).unwrap();
        let (f, unit) = free_bimodule(&m2, &x, &k).unwrap();
        assert_eq!(f.module().size(), Some(16));
        assert_eq!(image_size(&unit, &x, f.module()).unwrap(), 2);
        let (f, _) = free_bimodule(&k, &FpModule::cyclic(K2, &[2, 2]).unwrap(), &k).unwrap();
        assert!(iso(&f, &Bimodule::scalar(&FpModule::cyclic(K2, &[2, 2]).unwrap())));
        let (z, _) = free_bimodule(&m2, &FpModule::zero(K2), &m2).unwrap();
        assert_eq!(z.module().size(), Some(1));
    }

    #[test]
    fn bar_identities_dual_numbers() {
        let d = Arc::new(truncated_polynomials(K2, 2).unwrap());
        let k = ground_algebra(K2);
        let m = Bimodule::right_regular(&d);
        let eps = AlgebraMap::from_gens(d.clone(), k.clone(), &[vec![1], vec![0]]).unwrap();
        let n = Bimodule::restrict(&Bimodule::regular(&k), &eps, &AlgebraMap::identity(&k)).unwrap();
        let bar = bar_complex(&m, &n, 2).unwrap();
        assert_eq!(bar[2].carrier().size(), Some(256));
        assert!(check_simplicial_identities(&bar).unwrap().ok());
        // swapping two faces breaks d_i d_j = d_{j-1} d_i
        let mut broken = bar.clone();
        broken[2].faces.swap(0, 2);
        assert!(!check_simplicial_identities(&broken).unwrap().ok());
        let t = relative_tensor(&m, &n).unwrap().bimodule;
        assert!(bar_coequalizer(&bar).unwrap().is_isomorphic(t.module()));
        // A ⊗_A k = k
        assert_eq!(t.module().size(), Some(2));
        assert!(bar[0].carrier().is_isomorphic(&crate::module::tensor_ground(m.module(), n.module()).unwrap()));
    }

    #[test]
    fn bar_over_ground_has_invertible_faces() {
        let k = ground_algebra(GroundRing::IntegersMod(4));
        let x = Bimodule::scalar(&FpModule::cyclic(GroundRing::IntegersMod(4), &[4, 2]).unwrap());
        let bar = bar_complex(&x, &x, 2).unwrap();
        assert_eq!(*x.right(), k);
        for lvl in &bar[1..] {
            for f in &lvl.faces {
                let below = &bar[lvl.level - 1];
                assert!(f.is_bijective(lvl.carrier(), below.carrier()).unwrap());
            }
        }
    }

    #[test]
    fn pushforward_base_change() {
        let k4 = GroundRing::IntegersMod(4);
        let z4 = ground_algebra(k4);
        let z2 = Arc::new(cyclic_ring(k4, 2).unwrap());
        let red = AlgebraMap::from_gens(z4.clone(), z2.clone(), &[vec![1]]).unwrap();
        let m = Bimodule::scalar(&FpModule::cyclic(k4, &[4, 2]).unwrap());
        let p = pushforward(&red, &AlgebraMap::identity(&z4), &m).unwrap();
        // two-step: restrict ℤ/2 to (ℤ/2, ℤ/4), tensor
        let a2 = Bimodule::restrict(&Bimodule::regular(&z2), &AlgebraMap::identity(&z2), &red).unwrap();
        let direct = relative_tensor(&a2, &m).unwrap().bimodule;
        assert!(iso(&p, &direct));
        assert_eq!(p.module().invariant_factors(), vec![2, 2]);
    }
}
