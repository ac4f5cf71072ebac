mod oracle;

use proptest::prelude::*;
use tetun_core::collection::majority_vote;
use tetun_core::evaluation::Grade;

fn grades(v: &[u8]) -> Vec<Grade> {
    v.iter().map(|g| Grade::new(i64::from(*g)).unwrap()).collect()
}

#[test]
fn every_five_evaluator_vector() {
    for code in 0..1024u32 {
        let v: Vec<u8> = (0..5).map(|i| ((code >> (2 * i)) & 3) as u8).collect();
        let got = majority_vote(&grades(&v)).unwrap().value();
        assert_eq!(got, oracle::vote(&v), "{v:?}");
        for g in 0..=3u8 {
            if v.iter().filter(|x| **x == g).count() >= 3 {
                assert_eq!(got, g, "{v:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn order_does_not_matter(v in prop::collection::vec(0u8..=3, 1..12), perm in any::<prop::sample::Index>()) {
        let base = majority_vote(&grades(&v)).unwrap();
        let mut w = v.clone();
        let n = w.len();
        w.rotate_left(perm.index(n));
        w.reverse();
        prop_assert_eq!(majority_vote(&grades(&w)).unwrap(), base);
    }

    #[test]
    fn agrees_with_oracle_and_picks_a_mode(v in prop::collection::vec(0u8..=3, 1..12)) {
        let got = majority_vote(&grades(&v)).unwrap().value();
        prop_assert_eq!(got, oracle::vote(&v));
        let count = |g: u8| v.iter().filter(|x| **x == g).count();
        prop_assert_eq!(count(got), (0..=3).map(count).max().unwrap());
    }
}
