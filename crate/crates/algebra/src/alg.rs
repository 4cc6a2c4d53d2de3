//! The 1-truncated double category of algebras: algebras, algebra maps,
//! bimodules and bimodule maps over pairs of algebra maps. Statements are
//! checked up to explicit isomorphisms.

use std::sync::Arc;

use ncat_combinat::Tally;
use serde::Serialize;

use crate::algebra::{ground_algebra, Algebra, AlgebraMap};
use crate::bimodule::{iso_check, relative_tensor, Bimodule, IsoOutcome};
use crate::composite::{check_data, composite_fill, is_composite, EdgeData};
use crate::error::{AlgebraError, Result};
use crate::lattice::gcd;
use crate::module::{Bilinear, Elem, FpModule, GroundRing, LinearMap};

/// A cell of bidegree `(p, q)`, `p` vertical and `q` horizontal.
// few cells are alive at once, so boxing the square buys nothing
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum AlgCell {
    Object(Arc<Algebra>),
    Vertical(AlgebraMap),
    Horizontal(Bimodule),
    /// `map: top → bottom` with `map(a·m·b) = left(a)·map(m)·right(b)`
    Square { top: Bimodule, bottom: Bimodule, left: AlgebraMap, right: AlgebraMap, map: LinearMap },
}

impl AlgCell {
    pub fn bidegree(&self) -> (usize, usize) {
        match self {
            AlgCell::Object(_) => (0, 0),
            AlgCell::Vertical(_) => (1, 0),
            AlgCell::Horizontal(_) => (0, 1),
            AlgCell::Square { .. } => (1, 1),
        }
    }

    /// Boundaries line up and the square's map is equivariant.
    pub fn check(&self) -> Result<()> {
        let AlgCell::Square { top, bottom, left, right, map } = self else { return Ok(()) };
        if *left.src != **top.left() || *right.src != **top.right() || *left.tgt != **bottom.left() || *right.tgt != **bottom.right() {
            return Err(AlgebraError::Incompatible(format!("square from {top} to {bottom} along {} → {}, {} → {}", left.src, left.tgt, right.src, right.tgt)));
        }
        if !map.is_well_defined(top.module(), bottom.module()) {
            return Err(AlgebraError::NotWellDefined(format!("square map {top} → {bottom}")));
        }
        let n = bottom.module();
        for m in top.basis() {
            let fm = map.apply(n, &m);
            for a in top.left().basis() {
                if map.apply(n, &top.act_left(&a, &m)) != bottom.act_left(&left.apply(&a), &fm) {
                    return Err(AlgebraError::Axiom(format!("square map is not left equivariant at {m:?}")));
                }
            }
            for b in top.right().basis() {
                if map.apply(n, &top.act_right(&m, &b)) != bottom.act_right(&fm, &right.apply(&b)) {
                    return Err(AlgebraError::Axiom(format!("square map is not right equivariant at {m:?}")));
                }
            }
        }
        Ok(())
    }
}

/// `M` over `(A, B)` and `N` over `(B, C)`.
#[derive(Clone, Debug)]
pub struct ComposablePair {
    m: Bimodule,
    n: Bimodule,
}

impl ComposablePair {
    pub fn new(m: Bimodule, n: Bimodule) -> Result<Self> {
        if **m.right() != **n.left() {
            return Err(AlgebraError::MiddleMismatch { left: m.right().to_string(), right: n.left().to_string() });
        }
        Ok(ComposablePair { m, n })
    }

    pub fn first(&self) -> &Bimodule {
        &self.m
    }

    pub fn second(&self) -> &Bimodule {
        &self.n
    }
}

/// `M ⊗_B N` over `(A, C)`.
pub fn horizontal_compose(pair: &ComposablePair) -> Result<Bimodule> {
    Ok(relative_tensor(&pair.m, &pair.n)?.bimodule)
}

fn record_iso(t: &mut Tally, what: &str, outcome: IsoOutcome) {
    match outcome {
        IsoOutcome::Iso(_) => t.pass(),
        IsoOutcome::NotIso(why) => t.fail(|| format!("{what}: {why}")),
        IsoOutcome::Inconclusive(why) => t.undecided(|| format!("{what}: {why}")),
    }
}

#[derive(Clone, Debug)]
pub struct Roundtrip {
    pub tally: Tally,
    /// the filled long cell `M(0,2)`
    pub filled: Bimodule,
}

/// Fills the pair to a `Δ/[2]` algebra, restricts it back to its two
/// edges and compares with the input; also checks the filling is a
/// composite.
pub fn segal_roundtrip(pair: &ComposablePair, cutoff: u128) -> Result<Roundtrip> {
    let spine = EdgeData::new(vec![pair.m.left().clone(), pair.m.right().clone(), pair.n.right().clone()], vec![pair.m.clone(), pair.n.clone()])?;
    let data = composite_fill(&spine)?;
    let back = data.restrict()?;
    let mut t = Tally::new();
    for (i, (orig, res)) in spine.edges.iter().zip(&back.edges).enumerate() {
        record_iso(&mut t, &format!("restriction to edge ({i},{})", i + 1), iso_check(orig, res, cutoff)?);
    }
    t.merge(check_data(&data));
    t.merge(is_composite(&data)?);
    Ok(Roundtrip { tally: t, filled: data.cell(0, 2).clone() })
}

/// Every module `⊕ ℤ/dᵢ` with `d₁ | d₂ | ⋯ | d_g`, each `dᵢ > 1` dividing
/// the ground modulus.
pub fn modules_with_generators(ground: GroundRing, g: usize) -> Result<Vec<FpModule>> {
    let m = ground.modulus().ok_or(AlgebraError::Infinite)?;
    let divs: Vec<u64> = (2..=m).filter(|d| m % d == 0).collect();
    let mut chains: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..g {
        chains = chains
            .into_iter()
            .flat_map(|c| {
                let last = c.last().copied().unwrap_or(1);
                divs.iter().filter(move |&&d| d % last == 0).map(move |&d| c.iter().copied().chain([d]).collect::<Vec<_>>()).collect::<Vec<_>>()
            })
            .collect();
    }
    chains.iter().map(|c| FpModule::cyclic(ground, c)).collect()
}

/// All modules of order at most `max`, smallest generator count first.
pub fn modules_up_to_order(ground: GroundRing, max: u128) -> Result<Vec<FpModule>> {
    let mut out = vec![FpModule::zero(ground)];
    for g in 1.. {
        let found: Vec<FpModule> = modules_with_generators(ground, g)?.into_iter().filter(|x| x.size().is_some_and(|s| s <= max)).collect();
        if found.is_empty() {
            break;
        }
        out.extend(found);
    }
    Ok(out)
}

/// All endomorphisms of a finite module.
pub fn endomorphisms(x: &FpModule) -> Result<Vec<LinearMap>> {
    let elems = x.elements()?;
    let choices: Vec<Vec<&Elem>> = x.orders().iter().map(|&o| elems.iter().filter(|y| o % x.order_of(y) == 0).collect()).collect();
    let mut out = vec![Vec::new()];
    for c in &choices {
        out = out.into_iter().flat_map(|imgs: Vec<Elem>| c.iter().map(move |&y| imgs.iter().cloned().chain([y.clone()]).collect())).collect();
    }
    Ok(out.into_iter().map(|images| LinearMap { images }).collect())
}

/// Structures of a module over `alg` (on the right when `right` is set),
/// as the endomorphism by which each basis element acts. `None` when more
/// than `budget` partial assignments would be visited.
pub fn module_structures(alg: &Algebra, x: &FpModule, right: bool, budget: &mut u64) -> Result<Option<Vec<Vec<LinearMap>>>> {
    let ends = endomorphisms(x)?;
    let basis = alg.basis();
    let r = basis.len();
    let prod: Vec<Vec<Elem>> = basis.iter().map(|p| basis.iter().map(|q| alg.mul(p, q)).collect()).collect();
    let orders = alg.module().orders().to_vec();
    let compose = |f: &LinearMap, g: &LinearMap| g.then(f, x, x);
    let combine = |coeffs: &Elem, maps: &[&LinearMap]| LinearMap {
        images: (0..x.rank()).map(|j| x.combine(coeffs.iter().copied().zip(maps.iter().map(|m| &m.images[j])))).collect(),
    };
    let identity = LinearMap::identity(x);
    let mut out = Vec::new();
    let mut pick: Vec<&LinearMap> = Vec::with_capacity(r);
    fn go<'e>(
        i: usize,
        ends: &'e [LinearMap],
        pick: &mut Vec<&'e LinearMap>,
        budget: &mut u64,
        ok_at: &dyn Fn(&[&LinearMap]) -> bool,
        done: &mut dyn FnMut(&[&LinearMap]),
        r: usize,
    ) -> bool {
        if i == r {
            done(pick);
            return true;
        }
        for e in ends {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            pick.push(e);
            if ok_at(pick) && !go(i + 1, ends, pick, budget, ok_at, done, r) {
                return false;
            }
            pick.pop();
        }
        true
    }
    // the newest basis element against everything already chosen
    let ok_at = |pick: &[&LinearMap]| -> bool {
        let i = pick.len() - 1;
        let o = orders[i];
        if o != 0 && !pick[i].images.iter().all(|y| x.is_zero(&x.scale(o as i64, y))) {
            return false;
        }
        // each pair is checked once, when its last ingredient is chosen
        (0..=i).all(|p| {
            (0..=i).all(|q| {
                let c = &prod[p][q];
                let top = c.iter().rposition(|&v| v != 0).unwrap_or(0).max(p).max(q);
                if top != i {
                    return true;
                }
                let lhs = if right { compose(pick[q], pick[p]) } else { compose(pick[p], pick[q]) };
                lhs == combine(&c[..=i].to_vec(), pick)
            })
        })
    };
    let unit = alg.unit().clone();
    let mut done = |pick: &[&LinearMap]| {
        if combine(&unit, pick) == identity {
            out.push(pick.iter().map(|&m| m.clone()).collect());
        }
    };
    let finished = go(0, &ends, &mut pick, budget, &ok_at, &mut done, r);
    Ok(finished.then_some(out))
}

/// Every `(A, B)`-bimodule structure on `x`, or `None` past the budget.
pub fn bimodule_structures(a: &Arc<Algebra>, b: &Arc<Algebra>, x: &FpModule, budget: &mut u64) -> Result<Option<Vec<Bimodule>>> {
    let (Some(ls), Some(rs)) = (module_structures(a, x, false, budget)?, module_structures(b, x, true, budget)?) else {
        return Ok(None);
    };
    let mut out = Vec::new();
    for l in &ls {
        for r in &rs {
            let commute = l.iter().all(|t| r.iter().all(|s| s.then(t, x, x) == t.then(s, x, x)));
            if !commute {
                continue;
            }
            let xb: Vec<Elem> = (0..x.rank()).map(|j| x.basis_elem(j)).collect();
            let lact = Bilinear { table: l.iter().map(|t| t.images.clone()).collect() };
            let ract = Bilinear { table: xb.iter().enumerate().map(|(j, _)| r.iter().map(|s| s.images[j].clone()).collect()).collect() };
            let name = format!("{} #{}", x.describe(), out.len());
            out.push(Bimodule::new(name, a.clone(), b.clone(), x.clone(), lact, ract)?);
        }
    }
    Ok(Some(out))
}

/// Keeps one representative per isomorphism class; undecided comparisons
/// keep both.
fn dedup(found: Vec<Bimodule>, cutoff: u128) -> Result<Vec<Bimodule>> {
    let mut reps: Vec<Bimodule> = Vec::new();
    for m in found {
        let mut seen = false;
        for r in &reps {
            if iso_check(&m, r, cutoff)?.is_iso() {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(m);
        }
    }
    Ok(reps)
}

/// Action tables and module of a bimodule, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct BimoduleWitness {
    pub name: String,
    pub left: String,
    pub right: String,
    pub module: String,
    pub orders: Vec<u64>,
    pub left_action: Vec<Vec<Elem>>,
    pub right_action: Vec<Vec<Elem>>,
}

impl From<&Bimodule> for BimoduleWitness {
    fn from(m: &Bimodule) -> Self {
        BimoduleWitness {
            name: m.name().to_string(),
            left: m.left().to_string(),
            right: m.right().to_string(),
            module: m.module().describe(),
            orders: m.module().orders().to_vec(),
            left_action: m.left_action().table.clone(),
            right_action: m.right_action().table.clone(),
        }
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum MoritaOutcome {
    /// `P` over `(A, B)`, `Q` over `(B, A)` and the images of the cyclic
    /// basis under `P ⊗_B Q ≅ A` and `Q ⊗_A P ≅ B`
    Found { p: Bimodule, q: Bimodule, pq_iso: Vec<Elem>, qp_iso: Vec<Elem> },
    /// nothing invertible among the bimodules with at most `cap` generators
    NoneWithinCap { candidates: (usize, usize) },
    Inconclusive(String),
}

impl MoritaOutcome {
    /// The same pair read from `(B, A)`.
    pub fn swapped(self) -> Self {
        match self {
            MoritaOutcome::Found { p, q, pq_iso, qp_iso } => MoritaOutcome::Found { p: q, q: p, pq_iso: qp_iso, qp_iso: pq_iso },
            MoritaOutcome::NoneWithinCap { candidates: (a, b) } => MoritaOutcome::NoneWithinCap { candidates: (b, a) },
            other => other,
        }
    }
}

/// Images of the cyclic basis under `P ⊗_B Q ≅ A` and `Q ⊗_A P ≅ B`.
type InverseImages = (Vec<Elem>, Vec<Elem>);

/// Tests `P ⊗_B Q ≅ A` and `Q ⊗_A P ≅ B`.
fn invertible(p: &Bimodule, q: &Bimodule, cutoff: u128) -> Result<std::result::Result<InverseImages, Option<String>>> {
    let (a, b) = (Bimodule::regular(p.left()), Bimodule::regular(p.right()));
    let pq = relative_tensor(p, q)?.bimodule;
    if pq.module().size() != a.module().size() {
        return Ok(Err(None));
    }
    let first = match iso_check(&pq, &a, cutoff)? {
        IsoOutcome::Iso(w) => w,
        IsoOutcome::NotIso(_) => return Ok(Err(None)),
        IsoOutcome::Inconclusive(why) => return Ok(Err(Some(why))),
    };
    let qp = relative_tensor(q, p)?.bimodule;
    if qp.module().size() != b.module().size() {
        return Ok(Err(None));
    }
    match iso_check(&qp, &b, cutoff)? {
        IsoOutcome::Iso(w) => Ok(Ok((first, w))),
        IsoOutcome::NotIso(_) => Ok(Err(None)),
        IsoOutcome::Inconclusive(why) => Ok(Err(Some(why))),
    }
}

/// Bounded search for an invertible pair of bimodules: underlying modules
/// by generator count up to `cap`, then action tables, deduplicated up to
/// isomorphism. The first pair in enumeration order wins.
pub fn morita_search(a: &Arc<Algebra>, b: &Arc<Algebra>, cap: usize, budget: u64, cutoff: u128) -> Result<MoritaOutcome> {
    if a.ground() != b.ground() {
        return Err(AlgebraError::GroundMismatch);
    }
    if a == b {
        let reg = Bimodule::regular(a);
        if let Ok((pq_iso, qp_iso)) = invertible(&reg, &reg, cutoff)? {
            return Ok(MoritaOutcome::Found { p: reg.clone(), q: reg, pq_iso, qp_iso });
        }
    }
    let mut left = budget;
    let mut collect = |s: &Arc<Algebra>, t: &Arc<Algebra>| -> Result<Option<Vec<Bimodule>>> {
        let mut all = Vec::new();
        for g in 1..=cap {
            for x in modules_with_generators(a.ground(), g)? {
                match bimodule_structures(s, t, &x, &mut left)? {
                    Some(found) => all.extend(dedup(found, cutoff)?),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(all))
    };
    let (Some(ps), Some(qs)) = (collect(a, b)?, collect(b, a)?) else {
        return Ok(MoritaOutcome::Inconclusive(format!("more than {budget} partial action tables")));
    };
    let mut undecided = None;
    for p in &ps {
        for q in &qs {
            match invertible(p, q, cutoff)? {
                Ok((pq_iso, qp_iso)) => return Ok(MoritaOutcome::Found { p: p.clone(), q: q.clone(), pq_iso, qp_iso }),
                Err(Some(why)) => undecided = undecided.or(Some(why)),
                Err(None) => {}
            }
        }
    }
    Ok(match undecided {
        Some(why) => MoritaOutcome::Inconclusive(why),
        None => MoritaOutcome::NoneWithinCap { candidates: (ps.len(), qs.len()) },
    })
}

#[derive(Clone, Debug)]
pub struct BimodII {
    pub tally: Tally,
    /// unital `(k, k)` structures found on each module
    pub structures: Vec<(String, usize)>,
}

/// For each module: every unital `(k, k)`-bimodule structure on it is
/// isomorphic to the one where both actions are the ground action, and
/// forgetting that structure gives the module back. Modules larger than
/// `cutoff` are left undecided.
pub fn bimod_ii_check(ground: GroundRing, corpus: &[FpModule], cutoff: u128, budget: u64) -> Result<BimodII> {
    let k = ground_algebra(ground);
    let mut t = Tally::new();
    let mut structures = Vec::new();
    for x in corpus {
        if x.ground() != ground {
            return Err(AlgebraError::GroundMismatch);
        }
        let size = x.size().ok_or(AlgebraError::Infinite)?;
        if size > cutoff {
            t.undecided(|| format!("{}: order {size} above the cutoff {cutoff}", x.describe()));
            continue;
        }
        let mut left = budget;
        let Some(found) = bimodule_structures(&k, &k, x, &mut left)? else {
            t.undecided(|| format!("{}: more than {budget} partial action tables", x.describe()));
            continue;
        };
        structures.push((x.describe(), found.len()));
        let scalar = Bimodule::scalar(x);
        if found.is_empty() {
            t.fail(|| format!("{}: no unital structure at all", x.describe()));
        }
        for m in &found {
            record_iso(&mut t, &format!("{}: structure {}", x.describe(), m.name()), iso_check(m, &scalar, cutoff.max(1))?);
        }
        t.record(scalar.module() == x, || format!("{}: forgetting the ground structure changes the module", x.describe()));
    }
    Ok(BimodII { tally: t, structures })
}

/// `gcd` of the two ground moduli, for choosing a common corpus.
pub fn common_ground(a: GroundRing, b: GroundRing) -> GroundRing {
    match (a.modulus(), b.modulus()) {
        (Some(m), Some(n)) => GroundRing::IntegersMod(gcd(m, n)),
        (Some(m), None) | (None, Some(m)) => GroundRing::IntegersMod(m),
        (None, None) => GroundRing::Integers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, product_algebra, truncated_polynomials};
    use crate::bimodule::DEFAULT_ISO_CUTOFF;

    const K2: GroundRing = GroundRing::IntegersMod(2);

    fn iso(m: &Bimodule, n: &Bimodule) -> bool {
        iso_check(m, n, DEFAULT_ISO_CUTOFF).unwrap().is_iso()
    }

    #[test]
    fn regular_pair_roundtrip() {
        let d = Arc::new(truncated_polynomials(K2, 2).unwrap());
        let reg = Bimodule::regular(&d);
        let pair = ComposablePair::new(reg.clone(), reg.clone()).unwrap();
        let r = segal_roundtrip(&pair, DEFAULT_ISO_CUTOFF).unwrap();
        assert!(r.tally.ok(), "{:?}", r.tally.witnesses);
        assert!(iso(&r.filled, &reg));
    }

    #[test]
    fn morita_pair_roundtrip() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let rows = Bimodule::row_vectors(&m2, 2).unwrap();
        let cols = Bimodule::column_vectors(&m2, 2).unwrap();
        let r = segal_roundtrip(&ComposablePair::new(rows.clone(), cols.clone()).unwrap(), DEFAULT_ISO_CUTOFF).unwrap();
        assert!(r.tally.ok());
        assert!(iso(&r.filled, &Bimodule::regular(&k)));
        let r = segal_roundtrip(&ComposablePair::new(cols, rows).unwrap(), DEFAULT_ISO_CUTOFF).unwrap();
        assert!(r.tally.ok());
        assert!(iso(&r.filled, &Bimodule::regular(&m2)));
    }

    #[test]
    fn mismatched_middle_is_typed() {
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let rows = Bimodule::row_vectors(&m2, 2).unwrap();
        assert!(matches!(ComposablePair::new(rows.clone(), rows), Err(AlgebraError::MiddleMismatch { .. })));
    }

    #[test]
    fn units_and_associativity() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let rows = Bimodule::row_vectors(&m2, 2).unwrap();
        let cols = Bimodule::column_vectors(&m2, 2).unwrap();
        let right_unit = horizontal_compose(&ComposablePair::new(rows.clone(), Bimodule::regular(&m2)).unwrap()).unwrap();
        assert!(iso(&right_unit, &rows));
        let left_unit = horizontal_compose(&ComposablePair::new(Bimodule::regular(&k), rows.clone()).unwrap()).unwrap();
        assert!(iso(&left_unit, &rows));
        let lr = horizontal_compose(&ComposablePair::new(horizontal_compose(&ComposablePair::new(rows.clone(), cols.clone()).unwrap()).unwrap(), rows.clone()).unwrap()).unwrap();
        let rl = horizontal_compose(&ComposablePair::new(rows.clone(), horizontal_compose(&ComposablePair::new(cols, rows).unwrap()).unwrap()).unwrap()).unwrap();
        assert!(iso(&lr, &rl));
    }

    #[test]
    fn squares() {
        let d = Arc::new(truncated_polynomials(K2, 2).unwrap());
        let reg = Bimodule::regular(&d);
        let id = AlgebraMap::identity(&d);
        let sq = AlgCell::Square { top: reg.clone(), bottom: reg.clone(), left: id.clone(), right: id.clone(), map: LinearMap::identity(reg.module()) };
        assert_eq!(sq.bidegree(), (1, 1));
        sq.check().unwrap();
        // x ↦ 1 is not equivariant
        let bad = LinearMap { images: vec![reg.module().basis_elem(0), reg.module().basis_elem(0)] };
        let sq = AlgCell::Square { top: reg.clone(), bottom: reg.clone(), left: id.clone(), right: id, map: bad };
        assert!(sq.check().is_err());
    }

    #[test]
    fn module_corpus() {
        let sizes = |g: GroundRing| modules_up_to_order(g, 8).unwrap().iter().map(|m| m.size().unwrap()).collect::<Vec<_>>();
        assert_eq!(sizes(K2), [1, 2, 4, 8]);
        assert_eq!(sizes(GroundRing::IntegersMod(3)), [1, 3]);
        assert_eq!(sizes(GroundRing::IntegersMod(4)), [1, 2, 4, 4, 8, 8]);
        // |End((ℤ/2)²)| = 16, |End(ℤ/2 ⊕ ℤ/4)| = 2·2·2·4
        assert_eq!(endomorphisms(&FpModule::cyclic(K2, &[2, 2]).unwrap()).unwrap().len(), 16);
        assert_eq!(endomorphisms(&FpModule::cyclic(GroundRing::IntegersMod(4), &[2, 4]).unwrap()).unwrap().len(), 32);
    }

    #[test]
    fn bimod_ii_small() {
        for g in [K2, GroundRing::IntegersMod(3), GroundRing::IntegersMod(4)] {
            let corpus = modules_up_to_order(g, 8).unwrap();
            let r = bimod_ii_check(g, &corpus, 64, 1 << 20).unwrap();
            assert!(r.tally.ok(), "{g}: {:?}", r.tally.witnesses);
            assert!(r.structures.iter().all(|(_, n)| *n == 1));
        }
        let big = FpModule::cyclic(K2, &[2, 2, 2]).unwrap();
        let r = bimod_ii_check(K2, &[big], 4, 1 << 20).unwrap();
        assert_eq!(r.tally.undecided, 1);
        // an isomorphic presentation gives the same verdict
        let other = FpModule::new(GroundRing::IntegersMod(4), 2, vec![vec![2, 0], vec![1, 1]]).unwrap();
        let r = bimod_ii_check(GroundRing::IntegersMod(4), &[other], 64, 1 << 20).unwrap();
        assert!(r.tally.ok());
    }

    #[test]
    fn morita_examples() {
        let k = ground_algebra(K2);
        let m2 = Arc::new(matrix_algebra(K2, 2).unwrap());
        let MoritaOutcome::Found { p, q, .. } = morita_search(&k, &k, 1, 1 << 20, DEFAULT_ISO_CUTOFF).unwrap() else { panic!("k is Morita equivalent to itself") };
        assert!(p.same_data(&Bimodule::regular(&k)) && q.same_data(&Bimodule::regular(&k)));
        let found = morita_search(&k, &m2, 2, 1 << 20, DEFAULT_ISO_CUTOFF).unwrap();
        let MoritaOutcome::Found { p, q, .. } = found.clone() else { panic!("rows and columns are invertible") };
        assert!(iso(&p, &Bimodule::row_vectors(&m2, 2).unwrap()));
        assert!(iso(&q, &Bimodule::column_vectors(&m2, 2).unwrap()));
        // symmetric: the swapped pair works the other way round
        let MoritaOutcome::Found { p: p2, q: q2, .. } = found.swapped() else { unreachable!() };
        assert!(invertible(&p2, &q2, DEFAULT_ISO_CUTOFF).unwrap().is_ok());
        let kk = Arc::new(product_algebra(K2, 2).unwrap());
        let none = morita_search(&k, &kk, 2, 1 << 20, DEFAULT_ISO_CUTOFF).unwrap();
        assert!(matches!(none, MoritaOutcome::NoneWithinCap { .. }), "{none:?}");
        assert!(matches!(morita_search(&k, &m2, 2, 10, DEFAULT_ISO_CUTOFF).unwrap(), MoritaOutcome::Inconclusive(_)));
    }
}
