//! The two-sided criterion against the quotient of the full walk, on
//! random small weights over `Sym_4`.

mod common;

use common::{partitions, subset_action_oracle};
use dcwalk::chain::lump;
use dcwalk::cosets::{double_cosets, SubgroupSpec};
use dcwalk::exact::Rational;
use dcwalk::perm::{generate_group, GroupElements, GroupSpec};
use dcwalk::shuffle::type_s_matrix;
use dcwalk::weights::{check_lumping_hk, check_lumping_hk_with, full_walk, KRange, WeightFunction};
use proptest::prelude::*;

fn sym4() -> (GroupElements, Vec<SubgroupSpec>) {
    let group = generate_group(&GroupSpec::symmetric(4).unwrap(), 100).unwrap();
    let mut subgroups: Vec<SubgroupSpec> = partitions(4)
        .into_iter()
        .map(|p| SubgroupSpec::generate(&GroupSpec::young(&p).unwrap(), 100).unwrap())
        .collect();
    for c in ["(1 2 3 4)", "(1 2)(3 4)", "(1 3)"] {
        subgroups.push(SubgroupSpec::generate(&GroupSpec::parse(4, &[c]).unwrap(), 100).unwrap());
    }
    (group, subgroups)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn criterion_matches_quotient(
        hi in 0usize..8,
        ki in 0usize..8,
        entries in prop::collection::vec((0usize..24, 1i64..4), 1..6),
    ) {
        let (group, subgroups) = sym4();
        let (h, k) = (&subgroups[hi], &subgroups[ki]);
        let mut seen = std::collections::BTreeMap::new();
        for (i, v) in entries {
            *seen.entry(group.elements()[i].clone()).or_insert_with(|| Rational::from_integer(0.into())) +=
                Rational::from_integer(v.into());
        }
        let w = WeightFunction::new(4, seen).unwrap();
        let verdict = check_lumping_hk(&group, h, k, &w).unwrap();
        let all = check_lumping_hk_with(&group, h, k, &w, KRange::AllElements).unwrap();
        let parts = double_cosets(&group, h, k).unwrap().parts();
        let quotient = lump(&full_walk(&group, &w).unwrap(), &parts);
        prop_assert_eq!(verdict.lumps, quotient.is_ok());
        prop_assert_eq!(verdict.lumps, all.lumps);
        prop_assert_eq!(verdict.witness.is_some(), !verdict.lumps);
    }
}

#[test]
fn oracle_rows_are_stochastic_and_match_small_cases() {
    for (n, r) in [(5, 2), (7, 3)] {
        for s in 0..=r {
            let m = subset_action_oracle(n, r, s);
            for row in &m {
                assert_eq!(row.iter().sum::<Rational>(), Rational::from_integer(1.into()));
            }
            assert_eq!(type_s_matrix(n, r, s).unwrap().matrix(), &m);
        }
    }
}
