//! Whole-corpus sweeps returning tallies, shared by the batch driver and
//! the acceptance run.

use ncat_combinat::simplex::{DeltaMorphism, DeltaNMorphism, DeltaNObject};
use ncat_combinat::slice::{slice_category, SliceObject};
use ncat_combinat::{Budget, Tally};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alg::{bimod_ii_check, horizontal_compose, modules_up_to_order, morita_search, segal_roundtrip, ComposablePair, MoritaOutcome};
use crate::algebra::AlgebraMap;
use crate::bimodule::{
    associator, bar_complex, check_simplicial_identities, is_bimodule_iso, iso_check, profile_of, pushforward, relative_tensor,
    table_tensor_profile, Bimodule, IsoOutcome,
};
use crate::composite::{compare_fillings, composite_fill, EdgeData};
use crate::corpus::{self, composable_pairs, composable_triples};
use crate::module::{FpModule, GroundRing};
use crate::segal::{
    biaction_data, category_nerve, check_segal_monoid, check_segal_slice, check_uple, constant_presheaf, corrupt, delta_index, delta_n_index,
    double_nerve, external_product, extract_monoid, linear_nerve, monoid_to_presheaf, monoids_of_order, slice_at, Biaction, FiniteCategory,
    FiniteMonoid, Presheaf,
};
use crate::{AlgebraError, Result};

fn record_iso(t: &mut Tally, what: impl Fn() -> String, out: IsoOutcome) {
    match out {
        IsoOutcome::Iso(_) => t.pass(),
        IsoOutcome::NotIso(why) => t.fail(|| format!("{}: {why}", what())),
        IsoOutcome::Inconclusive(why) => t.undecided(|| format!("{}: {why}", what())),
    }
}

/// Monoids of order `≤ max_order` survive embedding then extraction, and
/// their nerves are functorial and Segal at truncation `d`.
pub fn monoid_roundtrips(max_order: usize, d: usize) -> Result<Tally> {
    let idx = delta_index(d)?;
    let mut t = Tally::new();
    for m in (1..=max_order).flat_map(monoids_of_order) {
        let x = monoid_to_presheaf(&m, &idx)?;
        t.merge(x.audit_functoriality());
        t.merge(check_segal_monoid(&x));
        t.record(extract_monoid(&x).as_ref() == Ok(&m), || format!("order {}: extraction differs from {:?}", m.size(), m.table()));
    }
    Ok(t)
}

/// `count` single-entry corruptions of nerves of nontrivial monoids of
/// order `≤ 4`, each of which the Segal check must reject.
pub fn corruptions(count: usize, seed: u64, d: usize) -> Result<Tally> {
    let idx = delta_index(d)?;
    let pool: Vec<FiniteMonoid> = (2..=4).flat_map(monoids_of_order).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..count {
        let m = pool.choose(&mut rng).expect("nonempty pool");
        let x = monoid_to_presheaf(m, &idx)?;
        match corrupt(&x, &mut rng) {
            Some((y, what)) => t.record(!check_segal_monoid(&y).ok(), || format!("accepted after {what}")),
            None => t.undecided(|| "nothing to corrupt".into()),
        }
    }
    Ok(t)
}

/// Nerves of regular biactions are Segal over `Δ/[1]` and restrict to Segal
/// monoids at both endpoints; duplicating a top cell is caught.
pub fn slice_restrictions(d: usize) -> Result<Tally> {
    let idx = slice_category(&DeltaNObject(vec![1]), d, Budget::default())?;
    let delta = delta_index(d)?;
    let mut t = Tally::new();
    for m in [FiniteMonoid::cyclic(2), FiniteMonoid::cyclic(3), FiniteMonoid::symmetric3()] {
        let c = biaction_data(&Biaction::regular(&m)).category()?;
        let x = linear_nerve(&c, &idx)?;
        t.merge(x.audit_functoriality());
        t.merge(check_segal_slice(&x));
        let top = idx
            .find(&SliceObject::from_sequence(1, [vec![0; d / 2 + 1], vec![1; d - d / 2]].concat())?)
            .ok_or_else(|| AlgebraError::Shape("top slice object".into()))?;
        t.record(!check_segal_slice(&x.with_duplicate(top, 0)).ok(), || format!("order {}: duplicated top cell accepted", m.size()));
        for end in 0..=1 {
            let over = |n: usize| idx.find(&SliceObject::from_sequence(1, vec![end; n + 1]).ok()?);
            let r = x.restrict(&delta, |a| over(delta.object(a).0[0]), |f| {
                let ar = delta.arrow(f);
                idx.find_arrow(over(delta.object(ar.src).0[0])?, over(delta.object(ar.tgt).0[0])?, &ar.map)
            })?;
            let ok = check_segal_monoid(&r).ok();
            t.record(ok, || format!("order {}: restriction to endpoint {end} is not a monoid", m.size()));
        }
    }
    Ok(t)
}

/// The 2-uple check against its slicewise reading: every row `X([k], −)`
/// and column `X(−, [k])` is a 1-uple object.
pub fn uple_agreement() -> Result<Tally> {
    let idx2 = delta_n_index(2, 2)?;
    let small = delta_index(2)?;
    let a = category_nerve(&FiniteCategory::ordinal(2), &small)?;
    let b = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &small)?;
    let z2 = FiniteMonoid::cyclic(2);
    let good = external_product(&[&a, &b], &idx2)?;
    let dup = idx2.find(&DeltaNObject(vec![1, 2])).ok_or_else(|| AlgebraError::Shape("object ([1],[2])".into()))?;
    let samples = [
        ("ordinal × monoid", good.clone()),
        ("with a duplicate", good.with_duplicate(dup, 1)),
        ("double nerve", double_nerve(&z2, &z2, &idx2)?),
        ("constant", constant_presheaf(&idx2, 3)?),
    ];
    let mut t = Tally::new();
    for (name, x) in &samples {
        let column = |k: usize| -> Result<Presheaf<'_, DeltaNObject>> {
            let at = |n: usize| idx2.find(&DeltaNObject(vec![n, k]));
            x.restrict(&small, |o| at(small.object(o).0[0]), |f| {
                let ar = small.arrow(f);
                let map = DeltaNMorphism(vec![ar.map.components()[0].clone(), DeltaMorphism::identity(k)]);
                idx2.find_arrow(at(small.object(ar.src).0[0])?, at(small.object(ar.tgt).0[0])?, &map)
            })
        };
        let mut slicewise = true;
        for k in 0..=2 {
            slicewise &= check_uple(&slice_at(x, k, &small)?).ok() && check_uple(&column(k)?).ok();
        }
        t.record(check_uple(x).ok() == slicewise, || format!("{name}: 2-uple {} but slicewise {slicewise}", check_uple(x).ok()));
    }
    Ok(t)
}

fn tensor(m: &Bimodule, n: &Bimodule) -> Result<Bimodule> {
    Ok(relative_tensor(m, n)?.bimodule)
}

/// `M ⊗_B B ≅ M ≅ A ⊗_A M` for every corpus bimodule with at most `max`
/// elements; `horizontal` routes through the double-category composite.
pub fn unit_laws(max: u128, cutoff: u128, horizontal: bool) -> Result<Tally> {
    let compose = |m: &Bimodule, n: &Bimodule| -> Result<Bimodule> {
        if horizontal {
            horizontal_compose(&ComposablePair::new(m.clone(), n.clone())?)
        } else {
            tensor(m, n)
        }
    };
    let mut t = Tally::new();
    for m in corpus::bimodules_up_to(max)? {
        record_iso(&mut t, || format!("{m} ⊗ B"), iso_check(&compose(&m, &Bimodule::regular(m.right()))?, &m, cutoff)?);
        record_iso(&mut t, || format!("A ⊗ {m}"), iso_check(&compose(&Bimodule::regular(m.left()), &m)?, &m, cutoff)?);
    }
    Ok(t)
}

/// The canonical associator is a bimodule isomorphism on every composable
/// corpus triple with carriers of at most `max` elements.
pub fn associativity(max: u128) -> Result<Tally> {
    let ms = corpus::bimodules_up_to(max)?;
    let mut t = Tally::new();
    for (i, j, l) in composable_triples(&ms) {
        let (a, b, c) = (&ms[i], &ms[j], &ms[l]);
        let assoc = associator(a, b, c)?;
        let ok = is_bimodule_iso(&assoc.left, &assoc.right, &assoc.map)?;
        t.record(ok, || format!("({a} ⊗ {b}) ⊗ {c}: associator not an isomorphism"));
    }
    Ok(t)
}

/// Presentation-based tensor against the brute-force quotient of the free
/// group on pairs, on corpus pairs of at most `max` elements and on all
/// pairs of scalar modules of order `≤ max` over the given grounds.
pub fn tensor_oracle(max: u128, grounds: &[GroundRing]) -> Result<Tally> {
    let mut t = Tally::new();
    let mut check = |m: &Bimodule, n: &Bimodule| -> Result<()> {
        let prod = tensor(m, n)?;
        let (e, table) = table_tensor_profile(m, n)?;
        t.record(profile_of(prod.module(), e) == table, || format!("{m} ⊗ {n}: presentation and tables disagree"));
        Ok(())
    };
    let ms = corpus::bimodules_up_to(max)?;
    for (i, j) in composable_pairs(&ms) {
        check(&ms[i], &ms[j])?;
    }
    for &g in grounds {
        let mods = modules_up_to_order(g, max)?;
        for x in &mods {
            for y in &mods {
                check(&Bimodule::scalar(x), &Bimodule::scalar(y))?;
            }
        }
    }
    Ok(t)
}

/// `ℤ/2 ⊗ ℤ/3 = 0` and `ℤ/4 ⊗ ℤ/6 ≅ ℤ/2` over the integers.
pub fn tensor_values() -> Result<Tally> {
    let z = |n: u64| -> Result<Bimodule> { Ok(Bimodule::scalar(&FpModule::cyclic(GroundRing::Integers, &[n])?)) };
    let mut t = Tally::new();
    for (a, b, want) in [(2, 3, vec![]), (4, 6, vec![2])] {
        let got = tensor(&z(a)?, &z(b)?)?.module().invariant_factors();
        t.record(got == want, || format!("ℤ/{a} ⊗ ℤ/{b}: invariant factors {got:?}, expected {want:?}"));
    }
    Ok(t)
}

/// Simplicial identities of the bar complex on every corpus pair of at most
/// `max` elements, storing up to `levels` levels or as many as fit.
pub fn bar_identities(max: u128, levels: usize) -> Result<Tally> {
    let ms = corpus::bimodules_up_to(max)?;
    let mut t = Tally::new();
    for (i, j) in composable_pairs(&ms) {
        // drop to fewer levels where the top one cannot be listed
        let mut stored = None;
        for l in (1..=levels).rev() {
            match bar_complex(&ms[i], &ms[j], l) {
                Ok(bar) => {
                    stored = Some(bar);
                    break;
                }
                Err(AlgebraError::TooLarge { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        match stored {
            Some(bar) => t.merge(check_simplicial_identities(&bar)?),
            None => t.undecided(|| format!("{} and {}: no level fits the enumeration cap", ms[i], ms[j])),
        }
    }
    Ok(t)
}

/// `(f′, g′)_! ∘ (f, g)_! ≅ (f′f, g′g)_!` along `k → D → k` and `k → D → D`,
/// plus the identity law and reduction `ℤ/4 → ℤ/2`.
pub fn pushforward_laws(cutoff: u128) -> Result<Tally> {
    let algs = corpus::algebras();
    let (k, d) = (&algs[0], &algs[1]);
    let unit = AlgebraMap::unit_map(d)?;
    let aug = corpus::augmentation(d);
    let (id_k, id_d) = (AlgebraMap::identity(k), AlgebraMap::identity(d));
    let routes = [(&unit, &aug), (&unit, &id_d)];
    let ms = corpus::bimodules()?;
    let mut t = Tally::new();
    for m in ms.iter().filter(|m| m.left() == k && m.right() == k) {
        for (f, g) in routes {
            for (f2, g2) in routes {
                let two = pushforward(g, g2, &pushforward(f, f2, m)?)?;
                let one = pushforward(&f.then(g)?, &f2.then(g2)?, m)?;
                record_iso(&mut t, || format!("{m} along two routes"), iso_check(&two, &one, cutoff)?);
            }
        }
        record_iso(&mut t, || format!("{m} along identities"), iso_check(&pushforward(&id_k, &id_k, m)?, m, cutoff)?);
    }
    let red = corpus::reduction();
    let id = AlgebraMap::identity(&red.tgt);
    for m in ms.iter().filter(|m| m.left() == &red.src && m.right() == &red.src) {
        let once = pushforward(&red, &red, m)?;
        record_iso(&mut t, || format!("{m} reduced then identity"), iso_check(&pushforward(&id, &id, &once)?, &once, cutoff)?);
    }
    Ok(t)
}

/// Filling a composable corpus pair, restricting to the spine and filling
/// again gives isomorphic data.
pub fn refill_stability(max: u128, cutoff: u128) -> Result<Tally> {
    let ms = corpus::bimodules_up_to(max)?;
    let mut t = Tally::new();
    for (i, j) in composable_pairs(&ms) {
        let (m, n) = (&ms[i], &ms[j]);
        let spine = EdgeData::new(vec![m.left().clone(), m.right().clone(), n.right().clone()], vec![m.clone(), n.clone()])?;
        let data = composite_fill(&spine)?;
        let again = composite_fill(&data.restrict()?)?;
        t.merge(compare_fillings(&data, &again, cutoff)?);
    }
    Ok(t)
}

/// `segal_roundtrip` on every composable corpus pair of at most `max`
/// elements and on the Morita context between `k` and `M₂(k)`.
pub fn alg_roundtrips(max: u128, cutoff: u128) -> Result<Tally> {
    let ms = corpus::bimodules_up_to(max)?;
    let mut t = Tally::new();
    for (i, j) in composable_pairs(&ms) {
        let r = segal_roundtrip(&ComposablePair::new(ms[i].clone(), ms[j].clone())?, cutoff)?;
        t.merge(r.tally);
    }
    Ok(t)
}

/// Over `ℤ/2`: rows ⊗ cols ≅ `k` and cols ⊗ rows ≅ `M₂`, each through the
/// Segal roundtrip, and `morita_search` finds the pair from both sides.
pub fn morita_pair(cap: usize, budget: u64, cutoff: u128) -> Result<Tally> {
    let algs = corpus::algebras();
    let (k, m2) = (&algs[0], &algs[3]);
    let rows = Bimodule::row_vectors(m2, 2)?;
    let cols = Bimodule::column_vectors(m2, 2)?;
    let mut t = Tally::new();
    for (p, q, unit) in [(&rows, &cols, k), (&cols, &rows, m2)] {
        let r = segal_roundtrip(&ComposablePair::new(p.clone(), q.clone())?, cutoff)?;
        t.merge(r.tally);
        record_iso(&mut t, || format!("{p} ⊗ {q} against {unit}"), iso_check(&r.filled, &Bimodule::regular(unit), cutoff)?);
    }
    for (a, b) in [(k, m2), (m2, k)] {
        match morita_search(a, b, cap, budget, cutoff)? {
            MoritaOutcome::Found { p, q, .. } => {
                let back = match morita_search(b, a, cap, budget, cutoff)? {
                    MoritaOutcome::Found { p: p2, q: q2, .. } => Some((p2, q2)),
                    _ => None,
                };
                let ok = back.is_some_and(|(p2, q2)| p.module().size() == q2.module().size() && q.module().size() == p2.module().size());
                t.record(ok, || format!("{a} and {b}: found one way only"));
            }
            MoritaOutcome::NoneWithinCap { candidates } => t.fail(|| format!("{a} and {b}: nothing invertible among {candidates:?}")),
            MoritaOutcome::Inconclusive(why) => t.undecided(|| format!("{a} and {b}: {why}")),
        }
    }
    Ok(t)
}

/// Uniqueness of unital `(k, k)` structures on every module of order
/// `≤ max_order` over each ground.
pub fn bimod_ii(grounds: &[GroundRing], max_order: u128, budget: u64, cutoff: u128) -> Result<Tally> {
    let mut t = Tally::new();
    for &g in grounds {
        let mods = modules_up_to_order(g, max_order)?;
        t.merge(bimod_ii_check(g, &mods, cutoff, budget)?.tally);
    }
    Ok(t)
}

/// The uniqueness verdict for `ℤ/2 ⊕ ℤ/4` over `ℤ/4`, written three ways,
/// and for `(ℤ/2)²` over `ℤ/2`, written two ways, does not change.
pub fn bimod_ii_presentations(budget: u64, cutoff: u128) -> Result<Tally> {
    let (z2, z4) = (GroundRing::IntegersMod(2), GroundRing::IntegersMod(4));
    let families = [
        (z4, vec![FpModule::cyclic(z4, &[2, 4])?, FpModule::new(z4, 2, vec![vec![2, 2]])?, FpModule::new(z4, 3, vec![vec![1, 1, 0], vec![0, 2, 0]])?]),
        (z2, vec![FpModule::free(z2, 2)?, FpModule::new(z2, 3, vec![vec![1, 1, 1]])?]),
    ];
    let mut t = Tally::new();
    for (g, forms) in &families {
        let verdicts = forms.iter().map(|x| Ok(ncat_combinat::Verdict::from(&bimod_ii_check(*g, std::slice::from_ref(x), cutoff, budget)?.tally))).collect::<Result<Vec<_>>>()?;
        let same_module = forms.iter().all(|x| x.is_isomorphic(&forms[0]));
        t.record(same_module && verdicts.iter().all(|v| *v == verdicts[0]), || format!("{}: verdicts {verdicts:?}", forms[0].describe()));
        t.record(verdicts[0] == ncat_combinat::Verdict::Pass, || format!("{}: {:?}", forms[0].describe(), verdicts[0]));
    }
    Ok(t)
}
