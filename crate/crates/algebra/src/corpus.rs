//! The fixed algebras and bimodules the property sweeps run over.

use std::sync::Arc;

use crate::algebra::{cyclic_ring, ground_algebra, matrix_algebra, product_algebra, truncated_polynomials, upper_triangular, Algebra, AlgebraMap};
use crate::bimodule::{free_bimodule, Bimodule};
use crate::module::{FpModule, GroundRing};
use crate::Result;

pub const K2: GroundRing = GroundRing::IntegersMod(2);
pub const Z4: GroundRing = GroundRing::IntegersMod(4);

/// `k`, `k[x]/x²`, `k × k`, `M₂(k)`, `T₂(k)` over `ℤ/2`, then `ℤ/4` and
/// `ℤ/2` over `ℤ/4`.
pub fn algebras() -> Vec<Arc<Algebra>> {
    let mut out = vec![
        ground_algebra(K2),
        Arc::new(truncated_polynomials(K2, 2).expect("dual numbers")),
        Arc::new(product_algebra(K2, 2).expect("k × k")),
        Arc::new(matrix_algebra(K2, 2).expect("M2")),
        Arc::new(upper_triangular(K2).expect("T2")),
    ];
    out.push(ground_algebra(Z4));
    out.push(Arc::new(cyclic_ring(Z4, 2).expect("ℤ/2 over ℤ/4")));
    out
}

/// `x ↦ x(0)` on `k[x]/x²`.
pub fn augmentation(d: &Arc<Algebra>) -> AlgebraMap {
    let k = ground_algebra(d.ground());
    AlgebraMap::from_gens(d.clone(), k, &[vec![1], vec![0]]).expect("augmentation")
}

/// Reduction `ℤ/4 → ℤ/2` over the ground `ℤ/4`.
pub fn reduction() -> AlgebraMap {
    let z4 = ground_algebra(Z4);
    let z2 = Arc::new(cyclic_ring(Z4, 2).expect("ℤ/2 over ℤ/4"));
    AlgebraMap::from_gens(z4, z2, &[vec![1]]).expect("reduction")
}

pub fn bimodules() -> Result<Vec<Bimodule>> {
    let algs = algebras();
    let (k, d, m2) = (&algs[0], &algs[1], &algs[3]);
    let mut out: Vec<Bimodule> = algs.iter().map(Bimodule::regular).collect();
    out.push(Bimodule::row_vectors(m2, 2)?);
    out.push(Bimodule::column_vectors(m2, 2)?);
    for a in [d, m2] {
        out.push(Bimodule::left_regular(a));
        out.push(Bimodule::right_regular(a));
    }
    let aug = augmentation(d);
    let reg_k = Bimodule::regular(k);
    out.push(Bimodule::restrict(&reg_k, &aug, &AlgebraMap::identity(k))?.renamed("k over (D, k)"));
    out.push(Bimodule::restrict(&reg_k, &AlgebraMap::identity(k), &aug)?.renamed("k over (k, D)"));
    out.push(free_bimodule(d, &FpModule::free(K2, 1)?, d)?.0.renamed("D ⊗ k ⊗ D"));
    out.push(free_bimodule(m2, &FpModule::free(K2, 1)?, k)?.0.renamed("M2 ⊗ k"));
    out.push(Bimodule::scalar(&FpModule::free(K2, 2)?));
    out.push(Bimodule::scalar(&FpModule::cyclic(Z4, &[2])?));
    out.push(Bimodule::scalar(&FpModule::cyclic(Z4, &[2, 4])?));
    let red = reduction();
    let z2 = Bimodule::regular(&red.tgt);
    out.push(Bimodule::restrict(&z2, &red, &red)?.renamed("ℤ/2 over (ℤ/4, ℤ/4)"));
    out.push(Bimodule::restrict(&z2, &red, &AlgebraMap::identity(&red.tgt))?.renamed("ℤ/2 over (ℤ/4, ℤ/2)"));
    Ok(out)
}

/// Bimodules with at most `max` elements.
pub fn bimodules_up_to(max: u128) -> Result<Vec<Bimodule>> {
    Ok(bimodules()?.into_iter().filter(|m| m.module().size().is_some_and(|s| s <= max)).collect())
}

/// Index pairs `(i, j)` with the right algebra of `i` the left of `j`.
pub fn composable_pairs(ms: &[Bimodule]) -> Vec<(usize, usize)> {
    (0..ms.len()).flat_map(|i| (0..ms.len()).map(move |j| (i, j))).filter(|&(i, j)| ms[i].right() == ms[j].left()).collect()
}

pub fn composable_triples(ms: &[Bimodule]) -> Vec<(usize, usize, usize)> {
    composable_pairs(ms).into_iter().flat_map(|(i, j)| (0..ms.len()).filter(move |&l| ms[j].right() == ms[l].left()).map(move |l| (i, j, l))).collect()
}
