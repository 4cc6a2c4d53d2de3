//! Finitely presented modules over `ℤ` or `ℤ/m`.
//!
//! A module keeps its presentation (generators and integer relations) and the
//! cyclic decomposition computed from it. Elements are vectors in the cyclic
//! coordinates, each reduced modulo its order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::lattice::{diagonalize, gcd, invariant_factors, lcm};

/// Largest carrier any construction may produce.
pub const SIZE_CAP: u128 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroundRing {
    Integers,
    IntegersMod(u64),
}

impl GroundRing {
    pub fn modulus(self) -> Option<u64> {
        match self {
            GroundRing::Integers => None,
            GroundRing::IntegersMod(m) => Some(m),
        }
    }
}

impl fmt::Display for GroundRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundRing::Integers => write!(f, "ℤ"),
            GroundRing::IntegersMod(m) => write!(f, "ℤ/{m}"),
        }
    }
}

pub type Elem = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpModule {
    ground: GroundRing,
    gens: usize,
    relations: Vec<Vec<i64>>,
    /// order of each cyclic coordinate, never 1
    orders: Vec<u64>,
    /// `gens × rank`
    coord: Vec<Vec<i64>>,
    /// `rank × gens`
    basis: Vec<Vec<i64>>,
}

fn narrow(x: i128, order: u64) -> i64 {
    if order == 0 {
        i64::try_from(x).expect("coordinate overflow")
    } else {
        x.rem_euclid(i128::from(order)) as i64
    }
}

impl FpModule {
    /// `ℤ^gens / relations`, further divided by `m` when the ground is `ℤ/m`.
    pub fn new(ground: GroundRing, gens: usize, relations: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_exponent(ground, gens, relations, None)
    }

    /// As [`FpModule::new`], told that `exponent` kills the module.
    pub fn with_exponent(ground: GroundRing, gens: usize, relations: Vec<Vec<i64>>, exponent: Option<u64>) -> Result<Self> {
        if let Some(r) = relations.iter().find(|r| r.len() != gens) {
            return Err(AlgebraError::Shape(format!("relation of length {} over {gens} generators", r.len())));
        }
        let modulus = match (ground.modulus(), exponent) {
            (Some(m), Some(e)) => Some(gcd(m, e)),
            (m, e) => m.or(e),
        };
        let d = diagonalize(&relations, gens, modulus);
        let keep: Vec<usize> = (0..gens).filter(|&c| d.orders[c] != 1).collect();
        let orders: Vec<u64> = keep.iter().map(|&c| d.orders[c]).collect();
        let coord = (0..gens)
            .map(|g| keep.iter().map(|&c| narrow(d.q[g][c], d.orders[c])).collect())
            .collect();
        let basis = keep
            .iter()
            .map(|&c| d.q_inv[c].iter().map(|&x| narrow(x, modulus.unwrap_or(0))).collect())
            .collect();
        Ok(FpModule { ground, gens, relations, orders, coord, basis })
    }

    /// `⊕ ℤ/oᵢ`, one generator per order.
    pub fn cyclic(ground: GroundRing, orders: &[u64]) -> Result<Self> {
        let n = orders.len();
        let rels = (0..n)
            .filter(|&i| orders[i] != 0)
            .map(|i| (0..n).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect())
            .collect();
        Self::new(ground, n, rels)
    }

    /// The ground ring to the power `rank`.
    pub fn free(ground: GroundRing, rank: usize) -> Result<Self> {
        Self::new(ground, rank, Vec::new())
    }

    pub fn zero(ground: GroundRing) -> Self {
        Self::new(ground, 0, Vec::new()).expect("zero module")
    }

    pub fn ground(&self) -> GroundRing {
        self.ground
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    /// Number of cyclic coordinates.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors(&self.orders)
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<u128> {
        self.orders.iter().try_fold(1u128, |acc, &o| (o != 0).then(|| acc * o as u128))
    }

    /// Least `e > 0` with `e·M = 0`, `None` when infinite.
    pub fn exponent(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |acc, &o| (o != 0).then(|| lcm(acc, o)))
    }

    /// Size of the `d`-torsion `{x : d·x = 0}`; determines the isomorphism type.
    pub fn torsion_count(&self, d: u64) -> u128 {
        self.orders.iter().map(|&o| gcd(d, o) as u128).product()
    }

    pub fn zero_elem(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut e = self.zero_elem();
        e[i] = 1;
        self.reduce(e)
    }

    pub fn reduce(&self, mut e: Elem) -> Elem {
        for (x, &o) in e.iter_mut().zip(&self.orders) {
            if o != 0 {
                *x = x.rem_euclid(o as i64);
            }
        }
        e
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, k: i64, a: &Elem) -> Elem {
        self.reduce(a.iter().map(|x| x * k).collect())
    }

    /// `Σ kᵢ·aᵢ`.
    pub fn combine<'a>(&self, terms: impl IntoIterator<Item = (i64, &'a Elem)>) -> Elem {
        let mut acc = vec![0i128; self.rank()];
        for (k, a) in terms {
            for (x, &y) in acc.iter_mut().zip(a) {
                *x += i128::from(k) * i128::from(y);
            }
        }
        acc.into_iter().zip(&self.orders).map(|(x, &o)| narrow(x, o)).collect()
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Element with the given generator coordinates.
    pub fn from_gens(&self, x: &[i64]) -> Elem {
        debug_assert_eq!(x.len(), self.gens);
        (0..self.rank())
            .map(|c| {
                let s: i128 = x.iter().zip(&self.coord).map(|(&xi, row)| i128::from(xi) * i128::from(row[c])).sum();
                narrow(s, self.orders[c])
            })
            .collect()
    }

    /// Generator coordinates of a representative.
    pub fn to_gens(&self, e: &Elem) -> Vec<i64> {
        let mut x = vec![0i128; self.gens];
        for (&k, row) in e.iter().zip(&self.basis) {
            for (xi, &b) in x.iter_mut().zip(row) {
                *xi += i128::from(k) * i128::from(b);
            }
        }
        let m = self.ground.modulus().or(self.exponent()).unwrap_or(0);
        x.into_iter().map(|v| narrow(v, m)).collect()
    }

    pub fn generator(&self, g: usize) -> Elem {
        self.coord[g].clone()
    }

    /// Every element, in mixed-radix order of the coordinates.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let size = self.size().ok_or(AlgebraError::Infinite)?;
        if size > SIZE_CAP {
            return Err(AlgebraError::TooLarge { size, cap: SIZE_CAP });
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut cur = self.zero_elem();
        for _ in 0..size {
            out.push(cur.clone());
            for (x, &o) in cur.iter_mut().zip(&self.orders) {
                *x += 1;
                if (*x as u64) < o {
                    break;
                }
                *x = 0;
            }
        }
        Ok(out)
    }

    /// Position of `e` in [`FpModule::elements`].
    pub fn index_of(&self, e: &Elem) -> usize {
        e.iter().zip(&self.orders).rev().fold(0usize, |acc, (&x, &o)| acc * o as usize + x as usize)
    }

    pub fn order_of(&self, e: &Elem) -> u64 {
        e.iter().zip(&self.orders).fold(1, |acc, (&x, &o)| if o == 0 { if x == 0 { acc } else { 0 } } else { lcm(acc, o / gcd(x as u64, o)) })
    }

    /// Same ground and same invariant factors.
    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.ground == other.ground && self.invariant_factors() == other.invariant_factors()
    }

    /// The module on this one's cyclic basis with `extra` also set to zero;
    /// its generator coordinates are this module's element coordinates.
    pub fn quotient(&self, extra: &[Elem]) -> Result<FpModule> {
        let n = self.rank();
        let mut rels: Vec<Vec<i64>> = (0..n)
            .filter(|&i| self.orders[i] != 0)
            .map(|i| (0..n).map(|j| if i == j { self.orders[i] as i64 } else { 0 }).collect())
            .collect();
        rels.extend(extra.iter().cloned());
        FpModule::with_exponent(self.ground, n, rels, self.exponent())
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule> {
        let orders: Vec<u64> = self.orders.iter().chain(&other.orders).copied().collect();
        FpModule::cyclic(self.ground, &orders)
    }

    pub fn describe(&self) -> String {
        let f = self.invariant_factors();
        if f.is_empty() {
            return "0".into();
        }
        f.iter().map(|&d| if d == 0 { "ℤ".to_string() } else { format!("ℤ/{d}") }).collect::<Vec<_>>().join(" ⊕ ")
    }
}

/// A homomorphism given by the images of the source's cyclic basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearMap {
    pub images: Vec<Elem>,
}

impl LinearMap {
    pub fn apply(&self, tgt: &FpModule, x: &Elem) -> Elem {
        tgt.combine(x.iter().copied().zip(&self.images))
    }

    pub fn identity(m: &FpModule) -> Self {
        LinearMap { images: (0..m.rank()).map(|i| m.basis_elem(i)).collect() }
    }

    pub fn zero(src: &FpModule, tgt: &FpModule) -> Self {
        LinearMap { images: vec![tgt.zero_elem(); src.rank()] }
    }

    /// Respects the orders of the source basis.
    pub fn is_well_defined(&self, src: &FpModule, tgt: &FpModule) -> bool {
        self.images.len() == src.rank()
            && self.images.iter().zip(src.orders()).all(|(y, &o)| o == 0 || tgt.is_zero(&tgt.scale(o as i64, y)))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &LinearMap, mid: &FpModule, tgt: &FpModule) -> LinearMap {
        let _ = mid;
        LinearMap { images: self.images.iter().map(|y| g.apply(tgt, y)).collect() }
    }

    /// Equal finite sizes and onto; the image is read off a quotient, so
    /// nothing is enumerated.
    pub fn is_bijective(&self, src: &FpModule, tgt: &FpModule) -> Result<bool> {
        let (Some(a), Some(b)) = (src.size(), tgt.size()) else { return Err(AlgebraError::Infinite) };
        Ok(a == b && tgt.quotient(&self.images)?.size() == Some(1))
    }
}

/// A bilinear map given on pairs of cyclic basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bilinear {
    pub table: Vec<Vec<Elem>>,
}

impl Bilinear {
    pub fn apply(&self, tgt: &FpModule, x: &Elem, y: &Elem) -> Elem {
        let mut acc = vec![0i128; tgt.rank()];
        for (i, &xi) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, &v)| v != 0) {
                let k = i128::from(xi) * i128::from(yj);
                for (a, &b) in acc.iter_mut().zip(&self.table[i][j]) {
                    *a += k * i128::from(b);
                }
            }
        }
        acc.into_iter().zip(tgt.orders()).map(|(x, &o)| narrow(x, o)).collect()
    }

    /// Each value is killed by the orders of both arguments.
    pub fn is_well_defined(&self, left: &FpModule, right: &FpModule, tgt: &FpModule) -> bool {
        self.table.len() == left.rank()
            && self.table.iter().enumerate().all(|(i, row)| {
                row.len() == right.rank()
                    && row.iter().enumerate().all(|(j, v)| {
                        let g = gcd(left.orders()[i], right.orders()[j]);
                        g == 0 || tgt.is_zero(&tgt.scale(g as i64, v))
                    })
            })
    }
}

/// Ground tensor product of several modules; generators are multi-indices of
/// the factors' cyclic bases.
#[derive(Clone, Debug)]
pub struct MultiTensor {
    pub module: FpModule,
    ranks: Vec<usize>,
}

impl MultiTensor {
    pub fn new(factors: &[&FpModule]) -> Result<Self> {
        let ground = factors.first().map(|m| m.ground()).ok_or_else(|| AlgebraError::Shape("empty tensor".into()))?;
        if factors.iter().any(|m| m.ground() != ground) {
            return Err(AlgebraError::GroundMismatch);
        }
        let ranks: Vec<usize> = factors.iter().map(|m| m.rank()).collect();
        let n: usize = ranks.iter().product();
        let bound: u128 = factors.iter().map(|m| m.size().unwrap_or(u128::MAX).min(u128::from(u64::MAX))).fold(1u128, |a, b| a.saturating_mul(b));
        let _ = bound;
        let mut rels = Vec::new();
        let mut exponent: Option<u64> = None;
        for m in factors {
            if let Some(e) = m.exponent() {
                exponent = Some(exponent.map_or(e, |x| gcd(x, e)));
            }
        }
        let mut idx = vec![0usize; factors.len()];
        for g in 0..n {
            let order = idx.iter().zip(factors).fold(0u64, |acc, (&i, m)| gcd(acc, m.orders()[i]));
            if order != 0 {
                let mut r = vec![0i64; n];
                r[g] = order as i64;
                rels.push(r);
            }
            for (k, x) in idx.iter_mut().enumerate().rev() {
                *x += 1;
                if *x < ranks[k] {
                    break;
                }
                *x = 0;
            }
        }
        let module = FpModule::with_exponent(ground, n, rels, exponent)?;
        Ok(MultiTensor { module, ranks })
    }

    /// Generator index of a multi-index, last factor fastest.
    pub fn index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.ranks).fold(0, |acc, (&i, &r)| acc * r + i)
    }

    pub fn decode(&self, mut g: usize) -> Vec<usize> {
        let mut idx = vec![0; self.ranks.len()];
        for (k, &r) in self.ranks.iter().enumerate().rev() {
            idx[k] = g % r;
            g /= r;
        }
        idx
    }

    /// Generator coordinates of `x₁ ⊗ ⋯ ⊗ x_p`.
    pub fn pure_gens(&self, elems: &[&Elem]) -> Vec<i64> {
        let mut out = vec![1i64];
        for e in elems {
            out = out.iter().flat_map(|&a| e.iter().map(move |&b| a * b)).collect();
        }
        out
    }

    pub fn pure(&self, elems: &[&Elem]) -> Elem {
        self.module.from_gens(&self.pure_gens(elems))
    }

    /// Writes an element as a combination of pure basis tensors.
    pub fn expand(&self, e: &Elem) -> Vec<(i64, Vec<usize>)> {
        self.module
            .to_gens(e)
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(g, c)| (c, self.decode(g)))
            .collect()
    }
}

/// `M ⊗ N` over the ground ring.
pub fn tensor_ground(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    Ok(MultiTensor::new(&[m, n])?.module)
}

/// `N / im(f − g)` and the projection `N → N / im(f − g)`.
pub fn coequalizer(f: &LinearMap, g: &LinearMap, n: &FpModule) -> Result<(FpModule, LinearMap)> {
    let diffs: Vec<Elem> = f.images.iter().zip(&g.images).map(|(a, b)| n.sub(a, b)).collect();
    let q = n.quotient(&diffs)?;
    let proj = LinearMap { images: (0..n.rank()).map(|i| q.generator(i)).collect() };
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: GroundRing = GroundRing::Integers;

    #[test]
    fn tensor_examples() {
        let z2 = FpModule::cyclic(Z, &[2]).unwrap();
        let z3 = FpModule::cyclic(Z, &[3]).unwrap();
        assert_eq!(tensor_ground(&z2, &z3).unwrap().size(), Some(1));
        let z4 = FpModule::cyclic(Z, &[4]).unwrap();
        let z6 = FpModule::cyclic(Z, &[6]).unwrap();
        assert_eq!(tensor_ground(&z4, &z6).unwrap().invariant_factors(), vec![2]);
        let free = FpModule::free(Z, 1).unwrap();
        let m = FpModule::cyclic(Z, &[2, 4]).unwrap();
        assert!(tensor_ground(&m, &free).unwrap().is_isomorphic(&m));
    }

    #[test]
    fn presentations_and_elements() {
        // ℤ²/((2,0),(0,4),(1,2)) is cyclic of order 4
        let m = FpModule::new(Z, 2, vec![vec![2, 0], vec![0, 4], vec![1, 2]]).unwrap();
        assert_eq!(m.invariant_factors(), vec![4]);
        let els = m.elements().unwrap();
        assert_eq!(els.len(), 4);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(m.index_of(e), i);
        }
        // generator coordinates round trip
        for e in &els {
            assert_eq!(&m.from_gens(&m.to_gens(e)), e);
        }
        let g0 = m.generator(0);
        let g1 = m.generator(1);
        // (1,2) = 0 so g0 = -2 g1
        assert!(m.is_zero(&m.add(&g0, &m.scale(2, &g1))));
        assert_eq!(m.order_of(&g1), 4);
    }

    #[test]
    fn ground_mod_m() {
        let k = GroundRing::IntegersMod(4);
        let m = FpModule::new(k, 2, vec![vec![2, 2]]).unwrap();
        assert_eq!(m.size(), Some(8));
        assert_eq!(m.invariant_factors(), vec![2, 4]);
        assert!(!FpModule::cyclic(k, &[2, 2]).unwrap().is_isomorphic(&FpModule::cyclic(k, &[4]).unwrap()));
        assert_eq!(FpModule::zero(k).size(), Some(1));
    }

    #[test]
    fn coequalizer_examples() {
        let k = GroundRing::IntegersMod(6);
        let n = FpModule::cyclic(k, &[6, 2]).unwrap();
        let id = LinearMap::identity(&n);
        let (q, _) = coequalizer(&id, &id, &n).unwrap();
        assert!(q.is_isomorphic(&n));
        let (q, _) = coequalizer(&id, &LinearMap::zero(&n, &n), &n).unwrap();
        assert_eq!(q.size(), Some(1));
    }

    #[test]
    fn size_guard() {
        let k = GroundRing::IntegersMod(2);
        // presentations may be large; listing their elements may not
        let big = FpModule::free(k, 13).unwrap();
        assert!(matches!(big.elements(), Err(AlgebraError::TooLarge { .. })));
        assert_eq!(FpModule::free(k, 12).unwrap().elements().unwrap().len(), 4096);
    }
}
