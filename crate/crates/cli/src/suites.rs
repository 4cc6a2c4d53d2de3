//! Registered verification suites, one per family of checked properties.

use std::collections::BTreeMap;
use std::time::Instant;

use ncat_algebra::bimodule::DEFAULT_ISO_CUTOFF;
use ncat_algebra::module::GroundRing;
use ncat_algebra::{sweeps, AlgebraError};
use ncat_combinat::nerve::{
    cellular_host, check_family_exclusive, check_k_factor, filtration_partition, u_host, verify_closure_hypotheses, Host, MarkedSubset,
};
use ncat_combinat::{gamma, simplex, slice, CombinatError, Tally, Verdict};
use serde_json::{json, Value};

use crate::{CliError, Report, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl SuiteError {
    /// The bound that stopped the run, if that is what happened.
    pub fn bound(&self) -> Option<String> {
        match self {
            SuiteError::Combinat(e @ CombinatError::BudgetExceeded { .. }) => Some(e.to_string()),
            SuiteError::Algebra(AlgebraError::Combinat(e @ CombinatError::BudgetExceeded { .. })) => Some(e.to_string()),
            SuiteError::Algebra(e @ AlgebraError::TooLarge { .. }) => Some(e.to_string()),
            _ => None,
        }
    }
}

type Outcome = Result<(Tally, Value), SuiteError>;

pub struct Suite {
    pub name: &'static str,
    pub anchor: &'static str,
    run: fn(&RunConfig) -> Outcome,
}

const SMALL_GROUNDS: [GroundRing; 3] = [GroundRing::IntegersMod(2), GroundRing::IntegersMod(3), GroundRing::IntegersMod(4)];

fn plain(t: Tally) -> Outcome {
    Ok((t, Value::Null))
}

fn merged(ts: impl IntoIterator<Item = Tally>) -> Tally {
    ts.into_iter().fold(Tally::new(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

fn factorization(_: &RunConfig) -> Outcome {
    plain(simplex::check_factorization(6))
}

fn morphism_classes(_: &RunConfig) -> Outcome {
    plain(merged([simplex::check_classification(5), simplex::check_n_classification(2)]))
}

fn enumeration_count(_: &RunConfig) -> Outcome {
    plain(simplex::check_enumeration_count(10))
}

fn cellularity(_: &RunConfig) -> Outcome {
    plain(merged([slice::check_cellularity_criterion(5), slice::check_phi_identity(5)]))
}

fn glue_final(cfg: &RunConfig) -> Outcome {
    plain(slice::check_glue_all(3, 3, cfg.truncation))
}

fn lambda_minimum(cfg: &RunConfig) -> Outcome {
    plain(slice::check_lambda_all(3, cfg.truncation))
}

fn slice_product(_: &RunConfig) -> Outcome {
    plain(slice::check_slice_product(2, 2))
}

fn u_category(cfg: &RunConfig) -> Outcome {
    plain(slice::check_u(cfg.truncation)?)
}

fn sifted_commas(cfg: &RunConfig) -> Outcome {
    let mut t = Tally::new();
    let mut pairs = Vec::new();
    for i in 0..=2 {
        for k in 1..=3 - i {
            let (report, tally) = slice::check_sift(i, k, cfg.truncation)?;
            t.merge(tally);
            t.record(report.verdict != Verdict::Fail, || format!("(i, k) = ({i}, {k}): {:?}", report.witnesses));
            pairs.push(json!({ "i": i, "k": k, "commas": report.checked }));
        }
    }
    Ok((t, json!({ "pairs": pairs })))
}

fn hosts(d: usize) -> Result<Vec<Host>, SuiteError> {
    let mut hs = (0..=2).map(|i| cellular_host(i, d)).collect::<Result<Vec<_>, _>>()?;
    hs.push(u_host(d)?);
    Ok(hs)
}

/// The marked subset each host is filtered relative to.
fn marked(h: &Host) -> MarkedSubset<'_> {
    if h.name == "𝒰" {
        MarkedSubset::two_algebras_and_object(h)
    } else {
        MarkedSubset::coproduct_cells(h)
    }
}

fn simplex_families(cfg: &RunConfig) -> Outcome {
    let h = cellular_host(2, cfg.truncation.min(2))?;
    plain(merged([check_family_exclusive(&h, 4), check_k_factor(&cellular_host(2, cfg.truncation)?, 3)]))
}

fn subset_closure(cfg: &RunConfig) -> Outcome {
    let hs = hosts(cfg.truncation)?;
    plain(merged(hs.iter().map(|h| marked(h).check_face_closed(3))))
}

fn closure_hypotheses(cfg: &RunConfig) -> Outcome {
    let hs = hosts(cfg.truncation)?;
    plain(merged(hs.iter().map(|h| verify_closure_hypotheses(&marked(h), 3))))
}

fn filtration(cfg: &RunConfig) -> Outcome {
    let hs = hosts(cfg.truncation)?;
    let mut t = Tally::new();
    let mut details = Vec::new();
    for h in &hs {
        let sub = marked(h);
        for n in 0..=3 {
            let r = filtration_partition(&sub, n)?;
            let stages: BTreeMap<&str, (usize, usize)> = r.stages.iter().map(|s| (s.stage.as_str(), (s.main, s.added))).collect();
            details.push(json!({ "host": h.name, "subset": sub.name, "n": n, "new_simplices": r.new_simplices, "stages": stages }));
            t.merge(r.tally);
        }
    }
    Ok((t, Value::Array(details)))
}

fn monoid_roundtrip(cfg: &RunConfig) -> Outcome {
    plain(sweeps::monoid_roundtrips(4, cfg.truncation)?)
}

fn segal_corruption(cfg: &RunConfig) -> Outcome {
    plain(sweeps::corruptions(100, cfg.seed, cfg.truncation)?)
}

fn slice_restriction(cfg: &RunConfig) -> Outcome {
    plain(sweeps::slice_restrictions(cfg.truncation)?)
}

fn uple_slicewise(_: &RunConfig) -> Outcome {
    plain(sweeps::uple_agreement()?)
}

fn tensor_unit(cfg: &RunConfig) -> Outcome {
    plain(sweeps::unit_laws(cfg.cap.into(), DEFAULT_ISO_CUTOFF, false)?)
}

fn tensor_associativity(cfg: &RunConfig) -> Outcome {
    plain(sweeps::associativity(cfg.cap.into())?)
}

fn tensor_oracle(cfg: &RunConfig) -> Outcome {
    plain(sweeps::tensor_oracle(u128::from(cfg.cap).min(16), &SMALL_GROUNDS)?)
}

fn tensor_values(_: &RunConfig) -> Outcome {
    plain(sweeps::tensor_values()?)
}

fn bar_identities(cfg: &RunConfig) -> Outcome {
    plain(sweeps::bar_identities(u128::from(cfg.cap).min(16), 2)?)
}

fn pushforward(_: &RunConfig) -> Outcome {
    plain(sweeps::pushforward_laws(DEFAULT_ISO_CUTOFF)?)
}

fn refill(cfg: &RunConfig) -> Outcome {
    plain(sweeps::refill_stability(u128::from(cfg.cap).min(16), DEFAULT_ISO_CUTOFF)?)
}

fn alg_roundtrip(cfg: &RunConfig) -> Outcome {
    plain(sweeps::alg_roundtrips(cfg.cap.into(), DEFAULT_ISO_CUTOFF)?)
}

fn horizontal_units(cfg: &RunConfig) -> Outcome {
    plain(merged([sweeps::unit_laws(cfg.cap.into(), DEFAULT_ISO_CUTOFF, true)?, sweeps::associativity(u128::from(cfg.cap).min(16))?]))
}

fn morita_pair(cfg: &RunConfig) -> Outcome {
    plain(sweeps::morita_pair(2, cfg.budget, DEFAULT_ISO_CUTOFF)?)
}

fn bimod_ii(cfg: &RunConfig) -> Outcome {
    plain(sweeps::bimod_ii(&SMALL_GROUNDS, 8, cfg.budget, DEFAULT_ISO_CUTOFF)?)
}

fn bimod_ii_presentations(cfg: &RunConfig) -> Outcome {
    plain(sweeps::bimod_ii_presentations(cfg.budget, DEFAULT_ISO_CUTOFF)?)
}

fn gamma_functoriality(_: &RunConfig) -> Outcome {
    plain(merged([gamma::check_u1_functorial(3), gamma::check_un_functorial(2, 3)]))
}

fn gamma_classes(_: &RunConfig) -> Outcome {
    plain(merged([gamma::check_u1_preserves_classes(4), gamma::check_mu_preserves_classes(3)]))
}

fn gamma_index(_: &RunConfig) -> Outcome {
    plain(gamma::check_index_roundtrip(4))
}

fn gamma_segal(_: &RunConfig) -> Outcome {
    plain(merged([gamma::check_segal_preservation(3, 1), gamma::check_segal_preservation(3, 2)]))
}

pub const SUITES: &[Suite] = &[
    Suite { name: "factorization-uniqueness", anchor: "unique active/inert factorization in Δ, ordinals ≤ 6", run: factorization },
    Suite { name: "morphism-classes", anchor: "inert and active maps closed under composition; Δ² classes componentwise", run: morphism_classes },
    Suite { name: "enumeration-count", anchor: "hom-set sizes of Δ against a multiset count", run: enumeration_count },
    Suite { name: "cellularity-criterion", anchor: "a map into [n] is cellular iff its restrictions to the cells are", run: cellularity },
    Suite { name: "glue-final", anchor: "glued extensions are final, certified independently", run: glue_final },
    Suite { name: "lambda-minimum", anchor: "closed-form minimum of the admissible-pair poset against brute force", run: lambda_minimum },
    Suite { name: "slice-product", anchor: "slices over a product of ordinals are products of slices", run: slice_product },
    Suite { name: "u-category", anchor: "the subcategory 𝒰 of Δ/[1]: closure, inert maps, initial objects", run: u_category },
    Suite { name: "sifted-commas", anchor: "comma categories of the sifted functor have terminal objects", run: sifted_commas },
    Suite { name: "simplex-families", anchor: "nondegenerate simplices fall in at most one family; k-factors recover simplices", run: simplex_families },
    Suite { name: "subset-closure", anchor: "marked subsets are closed under faces", run: subset_closure },
    Suite { name: "closure-hypotheses", anchor: "hypotheses of the cell-by-cell filtration argument", run: closure_hypotheses },
    Suite { name: "filtration-partition", anchor: "stagewise filtration is a disjoint exhaustive cover with horn faces present", run: filtration },
    Suite { name: "monoid-roundtrip", anchor: "monoids embed as Segal presheaves and extract back", run: monoid_roundtrip },
    Suite { name: "segal-corruption", anchor: "single-entry corruptions of monoid nerves are rejected", run: segal_corruption },
    Suite { name: "slice-restriction", anchor: "Segal objects over Δ/[1] restrict to monoids at both endpoints", run: slice_restriction },
    Suite { name: "uple-slicewise", anchor: "2-uple Segal objects are slicewise 1-uple", run: uple_slicewise },
    Suite { name: "tensor-unit", anchor: "M ⊗_B B ≅ M ≅ A ⊗_A M on the corpus", run: tensor_unit },
    Suite { name: "tensor-associativity", anchor: "canonical associator is a bimodule isomorphism on the corpus", run: tensor_associativity },
    Suite { name: "tensor-oracle", anchor: "presented tensor products against brute-force quotients of free groups on pairs", run: tensor_oracle },
    Suite { name: "tensor-values", anchor: "ℤ/2 ⊗ ℤ/3 = 0 and ℤ/4 ⊗ ℤ/6 ≅ ℤ/2", run: tensor_values },
    Suite { name: "bar-identities", anchor: "simplicial identities of the two-sided bar complex", run: bar_identities },
    Suite { name: "pushforward-composition", anchor: "pushforward along algebra maps composes", run: pushforward },
    Suite { name: "refill-stability", anchor: "restricting a composite filling to its spine and refilling is stable", run: refill },
    Suite { name: "alg-roundtrip", anchor: "fill, restrict and compare for composable corpus pairs", run: alg_roundtrip },
    Suite { name: "horizontal-units", anchor: "unit and associativity isomorphisms for horizontal composition", run: horizontal_units },
    Suite { name: "morita-pair", anchor: "k and M₂(k) over ℤ/2 are Morita equivalent through rows and columns", run: morita_pair },
    Suite { name: "bimod-ii", anchor: "unital (k, k)-bimodule structures on a k-module are unique up to isomorphism", run: bimod_ii },
    Suite { name: "bimod-ii-presentation", anchor: "bimodule uniqueness verdicts do not depend on the presentation", run: bimod_ii_presentations },
    Suite { name: "gamma-functoriality", anchor: "u¹ and u² preserve identities and composites", run: gamma_functoriality },
    Suite { name: "gamma-classes", anchor: "u¹ and μ send inert maps to inert maps and active to active", run: gamma_classes },
    Suite { name: "gamma-index", anchor: "pair index encoding for μ round-trips", run: gamma_index },
    Suite { name: "gamma-segal", anchor: "uⁿ sends inert cell maps to the Segal maps of Γ", run: gamma_segal },
];

pub fn find_suite(name: &str) -> Result<&'static Suite, CliError> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| CliError::UnknownSuite(name.to_string()))
}

/// Runs one suite; bounds that stop it surface as INCONCLUSIVE.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let suite = find_suite(name)?;
    cfg.validate()?;
    let start = Instant::now();
    Ok(match (suite.run)(cfg) {
        Ok((t, details)) => Report::from_tally(suite.name, suite.anchor, t, details, cfg, start.elapsed()),
        Err(e) => match e.bound() {
            Some(why) => Report::stopped(suite.name, suite.anchor, why, cfg, start.elapsed()),
            None => Report::errored(suite.name, suite.anchor, e.to_string(), cfg, start.elapsed()),
        },
    })
}

/// All suites in registry order, run on at most `cfg.jobs` threads.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<Report>, CliError> {
    cfg.validate()?;
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<Report, CliError>>>> = SUITES.iter().map(|_| Default::default()).collect();
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.min(SUITES.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(suite) = SUITES.get(i) else { break };
                let r = run_suite(suite.name, cfg);
                *slots[i].lock().expect("unpoisoned") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("unpoisoned").expect("every suite ran")).collect()
}
