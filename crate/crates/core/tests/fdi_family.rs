//! The facet family on instances with many zero weights, checked against the
//! hull oracle: every enumerated member is valid, the facet claim matches the
//! hull rank and the tight points span.

use mixknap_core::cut::g_membership;
use mixknap_core::fdi::{enumerate_specs, fdi_cut, fdi_tight_points, verify_tight_points, SpecEnumeration};
use mixknap_core::hull::{certify_facet_on, certify_valid_on, enumerate_hull_points};
use mixknap_core::{MixKnapInstance, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zero_heavy(rng: &mut ChaCha8Rng) -> MixKnapInstance {
    loop {
        let n = rng.gen_range(3..=9usize);
        let a: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.35) { 0 } else { rng.gen_range(1..=3) }).collect();
        let sum: i64 = a.iter().sum();
        let max = *a.iter().max().unwrap();
        if sum <= max {
            continue;
        }
        let p = rng.gen_range(max..sum);
        let mut h: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=25)).collect();
        h.sort_unstable_by(|x, y| y.cmp(x));
        let hr: Vec<Rational> = h.iter().map(|&v| Rational::from(v)).collect();
        let ar: Vec<Rational> = a.iter().map(|&v| Rational::from(v)).collect();
        return MixKnapInstance::canonicalize(&hr, &ar, &Rational::from(p)).unwrap();
    }
}

#[test]
fn family_members_are_valid_and_claims_match_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut members = 0;
    for _ in 0..150 {
        let inst = zero_heavy(&mut rng);
        let points = enumerate_hull_points(&inst).unwrap();
        for spec in enumerate_specs(&inst, &SpecEnumeration::default()).unwrap() {
            let cut = fdi_cut(&inst, &spec).unwrap();
            members += 1;
            assert!(certify_valid_on(&points, &cut).valid, "{:?} {:?}", inst, spec);
            assert!(g_membership(&inst, &cut).unwrap().member);
            let claim = cut.facet_claim == Some(true);
            assert_eq!(certify_facet_on(&points, inst.n(), &cut).unwrap().is_facet, claim, "{:?} {:?}", inst, spec);
            if claim {
                let pts = fdi_tight_points(&inst, &spec).unwrap();
                assert!(verify_tight_points(&inst, &cut, &pts).certifies_facet(inst.n()));
            }
        }
    }
    assert!(members > 100);
}
