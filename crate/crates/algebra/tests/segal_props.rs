use ncat_algebra::segal::{
    check_segal_monoid, corrupt, delta_index, extract_monoid, monoid_to_presheaf, monoids_of_order, FiniteMonoid,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn roundtrip_every_small_monoid() {
    let idx = delta_index(3).unwrap();
    let mut seen = 0;
    for n in 1..=4 {
        for m in monoids_of_order(n) {
            let x = monoid_to_presheaf(&m, &idx).unwrap();
            assert!(x.audit_functoriality().ok());
            assert!(check_segal_monoid(&x).ok());
            assert_eq!(extract_monoid(&x).unwrap(), m);
            seen += 1;
        }
    }
    assert!(seen > 100);
}

fn any_small_monoid() -> impl Strategy<Value = FiniteMonoid> {
    let all: Vec<FiniteMonoid> = (1..=4).flat_map(monoids_of_order).filter(|m| m.size() > 1).collect();
    prop::sample::select(all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn corruption_is_caught(m in any_small_monoid(), seed in any::<u64>()) {
        let idx = delta_index(3).unwrap();
        let x = monoid_to_presheaf(&m, &idx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (y, what) = corrupt(&x, &mut rng).unwrap();
        prop_assert!(!check_segal_monoid(&y).ok(), "{}", what);
    }
}
