//! Algebra data over `Δ/[n]`: diagonal algebras `A_i`, bimodules `M(i,j)`
//! for `i < j` and multiplications `M(i,j) × M(j,k) → M(i,k)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use ncat_combinat::Tally;

use crate::algebra::Algebra;
use crate::bimodule::{iso_check, relative_tensor, Bimodule, IsoOutcome, RelTensor};
use crate::error::{AlgebraError, Result};
use crate::module::{Bilinear, Elem, LinearMap};

/// Data on the spine: `A_0, …, A_n` and `M(i, i+1)`.
#[derive(Clone, Debug)]
pub struct EdgeData {
    pub diag: Vec<Arc<Algebra>>,
    pub edges: Vec<Bimodule>,
}

impl EdgeData {
    pub fn new(diag: Vec<Arc<Algebra>>, edges: Vec<Bimodule>) -> Result<Self> {
        if diag.len() != edges.len() + 1 {
            return Err(AlgebraError::Shape(format!("{} algebras for {} edges", diag.len(), edges.len())));
        }
        for (i, e) in edges.iter().enumerate() {
            if **e.left() != *diag[i] || **e.right() != *diag[i + 1] {
                return Err(AlgebraError::Incompatible(format!("edge ({i},{}) is {e}, expected over ({}, {})", i + 1, diag[i], diag[i + 1])));
            }
        }
        Ok(EdgeData { diag, edges })
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Clone, Debug)]
pub struct SliceAlgebraData {
    pub diag: Vec<Arc<Algebra>>,
    pub cells: BTreeMap<(usize, usize), Bimodule>,
    pub mult: BTreeMap<(usize, usize, usize), Bilinear>,
}

impl SliceAlgebraData {
    pub fn n(&self) -> usize {
        self.diag.len() - 1
    }

    pub fn cell(&self, i: usize, j: usize) -> &Bimodule {
        &self.cells[&(i, j)]
    }

    pub fn multiply(&self, i: usize, j: usize, k: usize, x: &Elem, y: &Elem) -> Elem {
        self.mult[&(i, j, k)].apply(self.cells[&(i, k)].module(), x, y)
    }

    /// Restriction to the spine.
    pub fn restrict(&self) -> Result<EdgeData> {
        EdgeData::new(self.diag.clone(), (0..self.n()).map(|i| self.cell(i, i + 1).clone()).collect())
    }
}

/// Left-nested tensors `(⋯(M(i,i+1) ⊗ M(i+1,i+2)) ⊗ ⋯) ⊗ M(j−1,j)` of
/// every interval of the spine.
#[derive(Clone, Debug)]
pub struct IteratedTensor {
    edges: Vec<Bimodule>,
    tensors: BTreeMap<(usize, usize), RelTensor>,
}

impl IteratedTensor {
    pub fn new(spine: &EdgeData) -> Result<Self> {
        let n = spine.n();
        let mut tensors = BTreeMap::new();
        for i in 0..n {
            for j in i + 2..=n {
                let left = if j == i + 2 { spine.edges[i].clone() } else { tensors.get(&(i, j - 1)).map(|t: &RelTensor| t.bimodule.clone()).expect("shorter interval first") };
                let t = relative_tensor(&left, &spine.edges[j - 1])?;
                tensors.insert((i, j), t);
            }
        }
        Ok(IteratedTensor { edges: spine.edges.clone(), tensors })
    }

    pub fn cell(&self, i: usize, j: usize) -> &Bimodule {
        if j == i + 1 {
            &self.edges[i]
        } else {
            &self.tensors[&(i, j)].bimodule
        }
    }

    /// `m_i ⊗ ⋯ ⊗ m_{j−1}` for a tuple of edge elements starting at `i`.
    pub fn pure(&self, i: usize, tuple: &[Elem]) -> Elem {
        let mut acc = tuple[0].clone();
        for (t, x) in tuple.iter().enumerate().skip(1) {
            acc = self.tensors[&(i, i + t + 1)].pure(&acc, x);
        }
        acc
    }

    /// Writes an element of cell `(i, j)` as a combination of pure tuples.
    pub fn expand(&self, i: usize, j: usize, x: &Elem) -> Vec<(i64, Vec<Elem>)> {
        if j == i + 1 {
            return vec![(1, vec![x.clone()])];
        }
        let t = &self.tensors[&(i, j)];
        t.expand(x)
            .into_iter()
            .flat_map(|(c, a, b)| {
                self.expand(i, j - 1, &t.left_basis()[a]).into_iter().map(move |(c2, mut tuple)| {
                    tuple.push(t.right_basis()[b].clone());
                    (c * c2, tuple)
                })
            })
            .collect()
    }
}

/// Fills every `M(i,j)` with the left-nested iterated tensor and builds
/// the multiplications by concatenating pure tuples.
pub fn composite_fill(spine: &EdgeData) -> Result<SliceAlgebraData> {
    let it = IteratedTensor::new(spine)?;
    let n = spine.n();
    let mut cells = BTreeMap::new();
    let mut mult = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..=n {
            cells.insert((i, j), it.cell(i, j).clone());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..=n {
                let (xs, ys) = (it.cell(i, j).basis(), it.cell(j, k).basis());
                let target = it.cell(i, k).module();
                let table = xs
                    .iter()
                    .map(|x| {
                        let ex = it.expand(i, j, x);
                        ys.iter()
                            .map(|y| {
                                let ey = it.expand(j, k, y);
                                let terms: Vec<(i64, Elem)> = ex
                                    .iter()
                                    .flat_map(|(c1, t1)| ey.iter().map(move |(c2, t2)| (c1 * c2, [t1.as_slice(), t2.as_slice()].concat())))
                                    .map(|(c, t)| (c, it.pure(i, &t)))
                                    .collect();
                                target.combine(terms.iter().map(|(c, e)| (*c, e)))
                            })
                            .collect()
                    })
                    .collect();
                mult.insert((i, j, k), Bilinear { table });
            }
        }
    }
    Ok(SliceAlgebraData { diag: spine.diag.clone(), cells, mult })
}

/// Structural checks on full data: cells over the right algebras,
/// multiplications well defined, balanced, equivariant and associative.
pub fn check_data(data: &SliceAlgebraData) -> Tally {
    let mut t = Tally::new();
    let n = data.n();
    for (&(i, j), m) in &data.cells {
        t.record(**m.left() == *data.diag[i] && **m.right() == *data.diag[j], || format!("M({i},{j}) is {m}"));
    }
    for (&(i, j, k), mu) in &data.mult {
        let (mij, mjk, mik) = (data.cell(i, j), data.cell(j, k), data.cell(i, k));
        if !mu.is_well_defined(mij.module(), mjk.module(), mik.module()) {
            t.fail(|| format!("μ({i},{j},{k}) is not well defined"));
            continue;
        }
        let (xs, ys) = (mij.basis(), mjk.basis());
        for x in &xs {
            for y in &ys {
                let xy = data.multiply(i, j, k, x, y);
                t.record(data.diag[j].basis().iter().all(|b| data.multiply(i, j, k, &mij.act_right(x, b), y) == data.multiply(i, j, k, x, &mjk.act_left(b, y))), || {
                    format!("μ({i},{j},{k}) is not balanced at {x:?}, {y:?}")
                });
                t.record(
                    data.diag[i].basis().iter().all(|a| data.multiply(i, j, k, &mij.act_left(a, x), y) == mik.act_left(a, &xy))
                        && data.diag[k].basis().iter().all(|c| data.multiply(i, j, k, x, &mjk.act_right(y, c)) == mik.act_right(&xy, c)),
                    || format!("μ({i},{j},{k}) is not equivariant at {x:?}, {y:?}"),
                );
                for l in k + 1..=n {
                    for z in data.cell(k, l).basis() {
                        let lhs = data.multiply(i, k, l, &xy, &z);
                        let rhs = data.multiply(i, j, l, x, &data.multiply(j, k, l, y, &z));
                        t.record(lhs == rhs, || format!("square ({i},{j},{k},{l}) fails at {x:?}, {y:?}, {z:?}"));
                    }
                }
            }
        }
    }
    t
}

/// The comparison map from the iterated tensor of the spine to `M(i,j)`.
pub fn comparison_map(data: &SliceAlgebraData, it: &IteratedTensor, i: usize, j: usize) -> LinearMap {
    let images = it
        .cell(i, j)
        .basis()
        .iter()
        .map(|e| {
            let terms: Vec<(i64, Elem)> = it
                .expand(i, j, e)
                .into_iter()
                .map(|(c, tuple)| {
                    let mut acc = tuple[0].clone();
                    for (t, x) in tuple.iter().enumerate().skip(1) {
                        acc = data.multiply(i, i + t, i + t + 1, &acc, x);
                    }
                    (c, acc)
                })
                .collect();
            data.cell(i, j).module().combine(terms.iter().map(|(c, e)| (*c, e)))
        })
        .collect();
    LinearMap { images }
}

/// PASS iff the data is consistent and every comparison map is an
/// isomorphism of bimodules.
pub fn is_composite(data: &SliceAlgebraData) -> Result<Tally> {
    let mut t = check_data(data);
    let it = IteratedTensor::new(&data.restrict()?)?;
    let n = data.n();
    for i in 0..n {
        for j in i + 2..=n {
            let (src, tgt) = (it.cell(i, j), data.cell(i, j));
            let phi = comparison_map(data, &it, i, j);
            let equivariant = src.basis().iter().all(|x| {
                let fx = phi.apply(tgt.module(), x);
                src.left().basis().iter().all(|a| phi.apply(tgt.module(), &src.act_left(a, x)) == tgt.act_left(a, &fx))
                    && src.right().basis().iter().all(|b| phi.apply(tgt.module(), &src.act_right(x, b)) == tgt.act_right(&fx, b))
            });
            let bijective = phi.is_well_defined(src.module(), tgt.module()) && phi.is_bijective(src.module(), tgt.module())?;
            t.record(equivariant && bijective, || {
                format!(
                    "M({i},{j}): comparison from the iterated tensor ({} elements) to {} ({} elements) is {}",
                    src.module().size().unwrap_or(0),
                    tgt.name(),
                    tgt.module().size().unwrap_or(0),
                    if bijective { "not equivariant" } else { "not bijective" }
                )
            });
        }
    }
    Ok(t)
}

/// Replaces `M(i,j)` by `M(i,j) ⊕ extra`; products land in the first
/// summand and ignore the second.
pub fn with_extra_summand(data: &SliceAlgebraData, (i, j): (usize, usize), extra: &Bimodule) -> Result<SliceAlgebraData> {
    let old = data.cell(i, j);
    let new = Bimodule::direct_sum(old, extra)?;
    let pad = extra.module().rank();
    let widen = |e: &Elem| -> Elem { e.iter().copied().chain(std::iter::repeat_n(0, pad)).collect() };
    let mut out = data.clone();
    for (&(a, b, c), mu) in data.mult.iter() {
        let mut table = mu.table.clone();
        if (a, c) == (i, j) {
            table = table.iter().map(|row| row.iter().map(widen).collect()).collect();
        }
        if (a, b) == (i, j) {
            let zero_row = vec![data.cell(a, c).module().zero_elem(); table[0].len()];
            table.extend(std::iter::repeat_n(zero_row, pad));
        }
        if (b, c) == (i, j) {
            for row in table.iter_mut() {
                let z = data.cell(a, c).module().zero_elem();
                row.extend(std::iter::repeat_n(z, pad));
            }
        }
        out.mult.insert((a, b, c), Bilinear { table });
    }
    out.cells.insert((i, j), new);
    Ok(out)
}

/// Cellwise isomorphism of two fillings of the same spine; identical cells
/// pass without a search.
pub fn compare_fillings(a: &SliceAlgebraData, b: &SliceAlgebraData, cutoff: u128) -> Result<Tally> {
    let mut t = Tally::new();
    for (key, m) in &a.cells {
        let other = b.cell(key.0, key.1);
        if m.same_data(other) {
            t.pass();
            continue;
        }
        match iso_check(m, other, cutoff)? {
            IsoOutcome::Iso(_) => t.pass(),
            IsoOutcome::NotIso(why) => t.fail(|| format!("M{key:?}: {why}")),
            IsoOutcome::Inconclusive(why) => t.undecided(|| format!("M{key:?}: {why}")),
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ground_algebra, matrix_algebra, truncated_polynomials};
    use crate::bimodule::DEFAULT_ISO_CUTOFF;
    use crate::module::{FpModule, GroundRing};

    const K2: GroundRing = GroundRing::IntegersMod(2);

    fn morita_chain() -> EdgeData {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let rows = Bimodule::row_vectors(&m2, 2).unwrap();
        let cols = Bimodule::column_vectors(&m2, 2).unwrap();
        EdgeData::new(vec![k.clone(), m2.clone(), k, m2], vec![rows.clone(), cols, rows]).unwrap()
    }

    #[test]
    fn one_edge_is_vacuous() {
        let d = Arc::new(truncated_polynomials(K2, 2).unwrap());
        let spine = EdgeData::new(vec![d.clone(), d.clone()], vec![Bimodule::regular(&d)]).unwrap();
        let data = composite_fill(&spine).unwrap();
        assert_eq!(data.cells.len(), 1);
        assert!(data.cell(0, 1).same_data(&spine.edges[0]));
        let t = is_composite(&data).unwrap();
        assert!(t.ok());
    }

    #[test]
    fn unit_edge_gives_first_edge() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let rows = Bimodule::row_vectors(&m2, 2).unwrap();
        let spine = EdgeData::new(vec![k, m2.clone(), m2.clone()], vec![rows.clone(), Bimodule::regular(&m2)]).unwrap();
        let data = composite_fill(&spine).unwrap();
        assert!(iso_check(data.cell(0, 2), &rows, DEFAULT_ISO_CUTOFF).unwrap().is_iso());
        assert!(is_composite(&data).unwrap().ok());
    }

    #[test]
    fn morita_chain_both_bracketings() {
        let spine = morita_chain();
        let data = composite_fill(&spine).unwrap();
        let t = is_composite(&data).unwrap();
        assert!(t.ok(), "{:?}", t.witnesses);
        let right = relative_tensor(&spine.edges[0], &relative_tensor(&spine.edges[1], &spine.edges[2]).unwrap().bimodule).unwrap().bimodule;
        assert!(iso_check(data.cell(0, 3), &right, DEFAULT_ISO_CUTOFF).unwrap().is_iso());
        assert_eq!(data.cell(0, 2).module().size(), Some(2));
        assert_eq!(data.cell(1, 3).module().size(), Some(16));
    }

    #[test]
    fn extra_summand_fails() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let spine = EdgeData::new(vec![k.clone(), m2.clone(), k.clone()], vec![Bimodule::row_vectors(&m2, 2).unwrap(), Bimodule::column_vectors(&m2, 2).unwrap()]).unwrap();
        let data = composite_fill(&spine).unwrap();
        let bad = with_extra_summand(&data, (0, 2), &Bimodule::scalar(&FpModule::free(K2, 1).unwrap())).unwrap();
        let t = is_composite(&bad).unwrap();
        assert!(check_data(&bad).ok());
        assert_eq!(t.failed, 1, "{:?}", t.witnesses);
    }

    #[test]
    fn refill_is_stable() {
        let data = composite_fill(&morita_chain()).unwrap();
        let again = composite_fill(&data.restrict().unwrap()).unwrap();
        let t = compare_fillings(&data, &again, DEFAULT_ISO_CUTOFF).unwrap();
        assert!(t.ok() && t.undecided == 0);
        assert_eq!(t.checked, 6);
    }

    #[test]
    fn mismatched_spine_rejected() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let rows = Bimodule::row_vectors(&m2, 2).unwrap();
        assert!(matches!(EdgeData::new(vec![k.clone(), k], vec![rows]), Err(AlgebraError::Incompatible(_))));
    }
}
