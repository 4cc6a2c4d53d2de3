//! Associative unital algebras over the ground ring, stored by structure
//! constants on the cyclic basis of their underlying module.

use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::module::{Bilinear, Elem, FpModule, GroundRing, LinearMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    name: String,
    module: FpModule,
    mult: Bilinear,
    unit: Elem,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Structure constants on generators: `table[a][b]` is the generator
/// coordinate vector of `g_a · g_b`.
pub type GenTable = Vec<Vec<Vec<i64>>>;

/// Turns a generator-level table into a bilinear map on cyclic bases,
/// checking that it respects every relation on either side.
pub fn bilinear_from_gens(left: &FpModule, right: &FpModule, tgt: &FpModule, table: &[Vec<Vec<i64>>]) -> Result<Bilinear> {
    let on_gens = |a: usize, b: usize| tgt.from_gens(&table[a][b]);
    if table.len() != left.generators() || table.iter().any(|r| r.len() != right.generators()) {
        return Err(AlgebraError::Shape("structure constants do not match the generators".into()));
    }
    // relations must go to zero
    for rel in left.relations() {
        for b in 0..right.generators() {
            let imgs: Vec<Elem> = (0..left.generators()).map(|a| on_gens(a, b)).collect();
            let v = tgt.combine(rel.iter().copied().zip(&imgs));
            if !tgt.is_zero(&v) {
                return Err(AlgebraError::NotWellDefined(format!("left relation {rel:?} against generator {b}")));
            }
        }
    }
    for rel in right.relations() {
        for a in 0..left.generators() {
            let imgs: Vec<Elem> = (0..right.generators()).map(|b| on_gens(a, b)).collect();
            let v = tgt.combine(rel.iter().copied().zip(&imgs));
            if !tgt.is_zero(&v) {
                return Err(AlgebraError::NotWellDefined(format!("right relation {rel:?} against generator {a}")));
            }
        }
    }
    let lb: Vec<Vec<i64>> = (0..left.rank()).map(|i| left.to_gens(&left.basis_elem(i))).collect();
    let rb: Vec<Vec<i64>> = (0..right.rank()).map(|j| right.to_gens(&right.basis_elem(j))).collect();
    let table = lb
        .iter()
        .map(|x| {
            rb.iter()
                .map(|y| {
                    let mut acc = vec![0i64; tgt.generators()];
                    for (a, &xa) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
                        for (b, &yb) in y.iter().enumerate().filter(|(_, &v)| v != 0) {
                            for (s, &t) in acc.iter_mut().zip(&table[a][b]) {
                                *s += xa * yb * t;
                            }
                        }
                    }
                    tgt.from_gens(&acc)
                })
                .collect()
        })
        .collect();
    Ok(Bilinear { table })
}

impl Algebra {
    /// Validates well-definedness, associativity and both unit laws.
    pub fn new(name: impl Into<String>, module: FpModule, mult: Bilinear, unit: Elem) -> Result<Self> {
        let name = name.into();
        if !mult.is_well_defined(&module, &module, &module) {
            return Err(AlgebraError::NotWellDefined(format!("multiplication of {name}")));
        }
        let a = Algebra { name, module, mult, unit: Vec::new() };
        let unit = a.module.reduce(unit);
        let a = Algebra { unit, ..a };
        a.check_axioms()?;
        Ok(a)
    }

    pub fn from_gens(name: impl Into<String>, module: FpModule, table: &[Vec<Vec<i64>>], unit_gens: &[i64]) -> Result<Self> {
        let mult = bilinear_from_gens(&module, &module, &module, table)?;
        let unit = module.from_gens(unit_gens);
        Self::new(name, module, mult, unit)
    }

    fn check_axioms(&self) -> Result<()> {
        let m = &self.module;
        let basis: Vec<Elem> = (0..m.rank()).map(|i| m.basis_elem(i)).collect();
        for x in &basis {
            if &self.mul(&self.unit, x) != x || &self.mul(x, &self.unit) != x {
                return Err(AlgebraError::Axiom(format!("{}: unit fails on {x:?}", self.name)));
            }
            for y in &basis {
                let xy = self.mul(x, y);
                for z in &basis {
                    if self.mul(&xy, z) != self.mul(x, &self.mul(y, z)) {
                        return Err(AlgebraError::Axiom(format!("{}: associativity fails on {x:?} {y:?} {z:?}", self.name)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn module(&self) -> &FpModule {
        &self.module
    }

    pub fn ground(&self) -> GroundRing {
        self.module.ground()
    }

    pub fn unit(&self) -> &Elem {
        &self.unit
    }

    pub fn mult(&self) -> &Bilinear {
        &self.mult
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        self.mult.apply(&self.module, x, y)
    }

    pub fn basis(&self) -> Vec<Elem> {
        (0..self.module.rank()).map(|i| self.module.basis_elem(i)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let b = self.basis();
        b.iter().all(|x| b.iter().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Number of elements commuting with everything.
    pub fn center_size(&self) -> Result<usize> {
        let b = self.basis();
        Ok(self.module.elements()?.iter().filter(|z| b.iter().all(|x| self.mul(x, z) == self.mul(z, x))).count())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// The ground ring as an algebra over itself.
pub fn ground_algebra(ground: GroundRing) -> Arc<Algebra> {
    let module = FpModule::free(ground, 1).expect("rank one");
    let name = ground.to_string();
    Arc::new(Algebra::from_gens(name, module, &[vec![vec![1]]], &[1]).expect("ground ring"))
}

/// `ℤ/m` as an algebra over the ground ring.
pub fn cyclic_ring(ground: GroundRing, m: u64) -> Result<Algebra> {
    let module = FpModule::cyclic(ground, &[m])?;
    Algebra::from_gens(format!("ℤ/{m}"), module, &[vec![vec![1]]], &[1])
}

/// `n × n` matrices, basis `E_ij` at generator `i·n + j`.
pub fn matrix_algebra(ground: GroundRing, n: usize) -> Result<Algebra> {
    let module = FpModule::free(ground, n * n)?;
    let table: GenTable = (0..n * n)
        .map(|a| {
            (0..n * n)
                .map(|b| {
                    let mut v = vec![0; n * n];
                    let (i, j, k, l) = (a / n, a % n, b / n, b % n);
                    if j == k {
                        v[i * n + l] = 1;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let unit: Vec<i64> = (0..n * n).map(|a| i64::from(a / n == a % n)).collect();
    Algebra::from_gens(format!("M{n}({ground})"), module, &table, &unit)
}

/// `k × ⋯ × k` with the coordinate idempotents as generators.
pub fn product_algebra(ground: GroundRing, copies: usize) -> Result<Algebra> {
    let module = FpModule::free(ground, copies)?;
    let table: GenTable = (0..copies)
        .map(|a| (0..copies).map(|b| (0..copies).map(|c| i64::from(a == b && b == c)).collect()).collect())
        .collect();
    let name = vec![ground.to_string(); copies].join("×");
    Algebra::from_gens(name, module, &table, &vec![1; copies])
}

/// `k[x]/(x^d)` on the monomial basis.
pub fn truncated_polynomials(ground: GroundRing, d: usize) -> Result<Algebra> {
    let module = FpModule::free(ground, d)?;
    let table: GenTable = (0..d)
        .map(|a| (0..d).map(|b| (0..d).map(|c| i64::from(a + b == c)).collect()).collect())
        .collect();
    let mut unit = vec![0; d];
    unit[0] = 1;
    Algebra::from_gens(format!("{ground}[x]/x^{d}"), module, &table, &unit)
}

/// Upper triangular `2 × 2` matrices, basis `E11, E12, E22`.
pub fn upper_triangular(ground: GroundRing) -> Result<Algebra> {
    let module = FpModule::free(ground, 3)?;
    let pos = |i: usize, j: usize| match (i, j) {
        (0, 0) => Some(0),
        (0, 1) => Some(1),
        (1, 1) => Some(2),
        _ => None,
    };
    let idx = [(0, 0), (0, 1), (1, 1)];
    let table: GenTable = idx
        .iter()
        .map(|&(i, j)| {
            idx.iter()
                .map(|&(k, l)| {
                    let mut v = vec![0; 3];
                    if j == k {
                        v[pos(i, l).expect("upper")] = 1;
                    }
                    v
                })
                .collect()
        })
        .collect();
    Algebra::from_gens(format!("T2({ground})"), module, &table, &[1, 0, 1])
}

/// A unital multiplicative linear map.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub src: Arc<Algebra>,
    pub tgt: Arc<Algebra>,
    pub map: LinearMap,
}

impl AlgebraMap {
    pub fn new(src: Arc<Algebra>, tgt: Arc<Algebra>, map: LinearMap) -> Result<Self> {
        if src.ground() != tgt.ground() {
            return Err(AlgebraError::GroundMismatch);
        }
        if !map.is_well_defined(src.module(), tgt.module()) {
            return Err(AlgebraError::NotWellDefined(format!("map {src} → {tgt}")));
        }
        let f = AlgebraMap { src, tgt, map };
        if f.apply(f.src.unit()) != *f.tgt.unit() {
            return Err(AlgebraError::NotUnital(format!("{} → {}", f.src, f.tgt)));
        }
        let b = f.src.basis();
        for x in &b {
            for y in &b {
                if f.apply(&f.src.mul(x, y)) != f.tgt.mul(&f.apply(x), &f.apply(y)) {
                    return Err(AlgebraError::Axiom(format!("{} → {} is not multiplicative on {x:?}, {y:?}", f.src, f.tgt)));
                }
            }
        }
        Ok(f)
    }

    /// Images given in the target's generator coordinates, one per source generator.
    pub fn from_gens(src: Arc<Algebra>, tgt: Arc<Algebra>, images: &[Vec<i64>]) -> Result<Self> {
        if images.len() != src.module().generators() {
            return Err(AlgebraError::Shape("one image per generator".into()));
        }
        let on_gens: Vec<Elem> = images.iter().map(|v| tgt.module().from_gens(v)).collect();
        for rel in src.module().relations() {
            if !tgt.module().is_zero(&tgt.module().combine(rel.iter().copied().zip(&on_gens))) {
                return Err(AlgebraError::NotWellDefined(format!("relation {rel:?}")));
            }
        }
        let images = (0..src.module().rank())
            .map(|i| tgt.module().combine(src.module().to_gens(&src.module().basis_elem(i)).into_iter().zip(&on_gens)))
            .collect();
        Self::new(src, tgt, LinearMap { images })
    }

    pub fn identity(a: &Arc<Algebra>) -> Self {
        AlgebraMap { src: a.clone(), tgt: a.clone(), map: LinearMap::identity(a.module()) }
    }

    /// The unit map from the ground ring.
    pub fn unit_map(a: &Arc<Algebra>) -> Result<Self> {
        let k = ground_algebra(a.ground());
        let images = vec![a.unit().clone(); k.module().rank()];
        Self::new(k, a.clone(), LinearMap { images })
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        self.map.apply(self.tgt.module(), x)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &AlgebraMap) -> Result<AlgebraMap> {
        if *self.tgt != *g.src {
            return Err(AlgebraError::Shape(format!("cannot compose {} → {} with {} → {}", self.src, self.tgt, g.src, g.tgt)));
        }
        let map = LinearMap { images: self.map.images.iter().map(|y| g.apply(y)).collect() };
        AlgebraMap::new(self.src.clone(), g.tgt.clone(), map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2: GroundRing = GroundRing::IntegersMod(2);

    #[test]
    fn corpus_algebras_are_valid() {
        assert_eq!(matrix_algebra(K2, 2).unwrap().module().size(), Some(16));
        assert_eq!(product_algebra(K2, 2).unwrap().module().size(), Some(4));
        assert_eq!(truncated_polynomials(K2, 2).unwrap().module().size(), Some(4));
        assert_eq!(upper_triangular(K2).unwrap().module().size(), Some(8));
        assert_eq!(cyclic_ring(GroundRing::IntegersMod(4), 2).unwrap().module().size(), Some(2));
        assert_eq!(ground_algebra(GroundRing::Integers).module().size(), None);
    }

    #[test]
    fn centers() {
        assert_eq!(matrix_algebra(K2, 2).unwrap().center_size().unwrap(), 2);
        assert_eq!(product_algebra(K2, 2).unwrap().center_size().unwrap(), 4);
        assert!(!upper_triangular(K2).unwrap().is_commutative());
        assert!(truncated_polynomials(K2, 3).unwrap().is_commutative());
    }

    #[test]
    fn bad_tables_rejected() {
        let m = FpModule::free(K2, 2).unwrap();
        // x·y = x, y·x = y is associative but has no unit
        let t = vec![vec![vec![1, 0], vec![1, 0]], vec![vec![0, 1], vec![0, 1]]];
        assert!(matches!(Algebra::from_gens("left zero", m, &t, &[1, 0]), Err(AlgebraError::Axiom(_))));
        let z4 = FpModule::cyclic(GroundRing::Integers, &[4]).unwrap();
        let z2 = FpModule::cyclic(GroundRing::Integers, &[2]).unwrap();
        // 1 ↦ 1 from ℤ/2 to ℤ/4 ignores the relation 2 = 0
        let a2 = Arc::new(Algebra::from_gens("ℤ/2", z2, &[vec![vec![1]]], &[1]).unwrap());
        let a4 = Arc::new(Algebra::from_gens("ℤ/4", z4, &[vec![vec![1]]], &[1]).unwrap());
        assert!(AlgebraMap::from_gens(a2.clone(), a4.clone(), &[vec![1]]).is_err());
        assert!(AlgebraMap::from_gens(a4, a2, &[vec![1]]).is_ok());
    }

    #[test]
    fn maps_compose() {
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let u = AlgebraMap::unit_map(&m2).unwrap();
        let id = AlgebraMap::identity(&m2);
        let c = u.then(&id).unwrap();
        assert_eq!(c.apply(&vec![1]), *m2.unit());
        // x ↦ 0 is not unital
        let d = Arc::new(truncated_polynomials(K2, 2).unwrap());
        let k = ground_algebra(K2);
        assert!(matches!(AlgebraMap::from_gens(d.clone(), k.clone(), &[vec![0], vec![0]]), Err(AlgebraError::NotUnital(_))));
        assert!(AlgebraMap::from_gens(d, k, &[vec![1], vec![0]]).is_ok());
    }
}
