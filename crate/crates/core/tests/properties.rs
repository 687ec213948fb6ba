use fpnfr_core::{
    compute_adi, compute_tdi, estimate, fp_bounds, one_way_sensitivity, tornado, Complexity,
    Decimal, Factor, FunctionCell, FunctionInventory, FunctionType, GscRatingSheet,
    NfrRatingSheet, Project, Vary, WeightProfile,
};
use proptest::prelude::*;
use rust_decimal_macros::dec;

fn project_strategy() -> impl Strategy<Value = Project> {
    (
        proptest::array::uniform15(0u32..40),
        proptest::array::uniform14(0u8..=5),
        proptest::array::uniform7(0u8..=5),
    )
        .prop_map(|(counts, gsc, nfr)| {
            let mut p = Project::zeroed("prop", "ifpug-standard");
            p.inventory = FunctionCell::all().zip(counts).collect::<FunctionInventory>();
            p.gsc = GscRatingSheet::from_values(&gsc);
            p.nfr = NfrRatingSheet::from_values(&nfr);
            p
        })
}

fn profile() -> WeightProfile {
    WeightProfile::builtin("ifpug-standard").unwrap()
}

fn set(p: &mut Project, factor: Factor, di: u8) {
    match factor {
        Factor::Gsc(g) => {
            p.gsc.set(g, di);
        }
        Factor::Nfr(n) => {
            p.nfr.set(n, di);
        }
    }
}

fn get(p: &Project, factor: Factor) -> u8 {
    match factor {
        Factor::Gsc(g) => p.gsc.value(g),
        Factor::Nfr(n) => p.nfr.value(n),
    }
}

proptest! {
    #[test]
    fn report_ranges_and_identities(p in project_strategy()) {
        let r = estimate(&p, &profile()).unwrap();
        prop_assert!(r.tdi <= 70 && r.adi <= 35 && r.tdi_n <= 105);
        prop_assert_eq!(r.tdi_n, r.tdi + r.adi);
        prop_assert_eq!(r.vaf_extended, dec!(0.65) + dec!(0.01) * Decimal::from(r.tdi_n));
        prop_assert!(r.vaf_extended >= dec!(0.65) && r.vaf_extended <= dec!(1.70));
        prop_assert!(r.vaf_classic >= dec!(0.65) && r.vaf_classic <= dec!(1.35));
        prop_assert_eq!(r.fp_extended, r.ufp * r.vaf_extended);
        prop_assert_eq!(r.fp_classic, r.ufp * r.vaf_classic);
    }

    #[test]
    fn unit_step_adds_one_percent_of_ufp(p in project_strategy(), idx in 0usize..21) {
        let factor = Factor::all().nth(idx).unwrap();
        prop_assume!(get(&p, factor) < 5);
        let before = estimate(&p, &profile()).unwrap();
        let mut q = p.clone();
        set(&mut q, factor, get(&p, factor) + 1);
        let after = estimate(&q, &profile()).unwrap();
        prop_assert_eq!(after.fp_extended - before.fp_extended, dec!(0.01) * before.ufp);
    }

    #[test]
    fn classic_reduction(mut p in project_strategy()) {
        p.nfr = NfrRatingSheet::uniform(0);
        let r = estimate(&p, &profile()).unwrap();
        prop_assert_eq!(r.fp_extended, r.fp_classic);
        prop_assert_eq!(r.fp_extended.serialize(), r.fp_classic.serialize());
    }

    #[test]
    fn totals_ignore_summand_order(gsc in proptest::array::uniform14(0u8..=5), nfr in proptest::array::uniform7(0u8..=5), rot in 0usize..14) {
        let mut g2 = gsc;
        g2.rotate_left(rot);
        let mut n2 = nfr;
        n2.reverse();
        prop_assert_eq!(compute_tdi(&GscRatingSheet::from_values(&gsc)), compute_tdi(&GscRatingSheet::from_values(&g2)));
        prop_assert_eq!(compute_adi(&NfrRatingSheet::from_values(&nfr)), compute_adi(&NfrRatingSheet::from_values(&n2)));
    }

    #[test]
    fn full_bounds_ignore_current_ratings(p in project_strategy()) {
        let ufp = estimate(&p, &profile()).unwrap().ufp;
        prop_assert_eq!(fp_bounds(&p, &profile(), Vary::All).unwrap(), (dec!(0.65) * ufp, dec!(1.70) * ufp));
    }

    #[test]
    fn sweeps_are_affine(p in project_strategy(), idx in 0usize..21) {
        let factor = Factor::all().nth(idx).unwrap();
        let r = one_way_sensitivity(&p, &profile(), factor).unwrap();
        let ufp = estimate(&p, &profile()).unwrap().ufp;
        for pair in r.fp_at_di.windows(2) {
            prop_assert_eq!(pair[1] - pair[0], dec!(0.01) * ufp);
        }
        prop_assert_eq!(r.swing, dec!(0.05) * ufp);
        prop_assert_eq!(r.fp_at_di[usize::from(get(&p, factor))], r.baseline_fp);
    }

    #[test]
    fn tornado_is_complete_and_stable(p in project_strategy()) {
        let t = tornado(&p, &profile()).unwrap();
        prop_assert_eq!(t.len(), 21);
        prop_assert_eq!(t.iter().map(|r| r.factor).collect::<Vec<_>>(), Factor::all().collect::<Vec<_>>());
    }

    #[test]
    fn estimate_is_deterministic(p in project_strategy()) {
        prop_assert_eq!(estimate(&p, &profile()).unwrap(), estimate(&p, &profile()).unwrap());
    }
}

#[test]
fn midrange_symmetry() {
    let mut p = Project::zeroed("mid", "unit");
    p.inventory = FunctionInventory::zeroed()
        .with(FunctionCell::new(FunctionType::ExternalInput, Complexity::Low), 1000);
    let unit = WeightProfile::uniform("unit", dec!(1)).unwrap();
    let low = estimate(&p, &unit).unwrap();
    p.gsc = GscRatingSheet::uniform(5);
    p.nfr = NfrRatingSheet::uniform(5);
    let high = estimate(&p, &unit).unwrap();
    let mid = dec!(1.175) * low.ufp;
    assert_eq!(high.fp_extended - mid, dec!(525));
    assert_eq!(mid - low.fp_extended, dec!(525));
}
