use std::collections::BTreeMap;

use lieinv::expr::{rat, SamplerConfig};
use lieinv::invariants::{run_pipeline, Pipeline};
use lieinv::liealg::lookup;
use proptest::prelude::*;

fn admissible_h() -> impl Strategy<Value = i64> {
    (-8i64..=7).prop_filter("h must avoid 0", |k| *k != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn transitive_pipeline_verifies_for_any_h(k in admissible_h()) {
        let params = BTreeMap::from([("h".to_string(), rat(k, 8))]);
        let entry = lookup("g3_4", &params).unwrap();
        let (set, template) = run_pipeline(&entry, Pipeline::Transitive, 1, &SamplerConfig::default()).unwrap();
        prop_assert!(set.verified());
        prop_assert_eq!(set.invariants.len(), 5);
        prop_assert_eq!(template.heads.len(), 3);
    }

    #[test]
    fn free_pipeline_verifies_for_any_p(k in 0i64..=8, m in 1usize..=2) {
        let params = BTreeMap::from([("p".to_string(), rat(k, 4))]);
        let entry = lookup("g3_5", &params).unwrap();
        let (set, _) = run_pipeline(&entry, Pipeline::Free, m, &SamplerConfig::default()).unwrap();
        prop_assert!(set.verified());
        prop_assert_eq!(set.invariants.len(), set.expected_count());
    }
}
