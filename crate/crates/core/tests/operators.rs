use paracyc::comparison::cochains::{convert_cocycle, random_cocycle, Cochain};
use paracyc::comparison::periodicity::periodicity_s;
use paracyc::comparison::{ComparisonContext, ComparisonPack};
use paracyc::cyclic::{derive_operators, homotopy_change_iso, validate, StructureFile};
use paracyc::linalg::q;
use paracyc::perturbation::{check_special, delta_tilde_identity, make_special, non_special_control, perturb, TransferenceData};
use paracyc::suites::{alternative_homotopy, run_suite, Subject, Suite};
use paracyc::zoo::{zoo_entry, EXAMPLE_NAMES};
use paracyc::{GradedMap, RationalMatrix};
use proptest::prelude::*;

fn setup(name: &str, m: usize) -> (ComparisonContext, ComparisonPack) {
    let ctx = ComparisonContext::for_example(name, m).unwrap();
    let pack = ComparisonPack::build(&ctx).unwrap();
    (ctx, pack)
}

#[test]
fn non_special_control_breaks_delta_tilde_identity() {
    let td = non_special_control();
    let rep = check_special(&td.f, &td.g, &td.phi, &td.source.dl);
    assert!(rep.passed("phi^2 = 0"));
    assert!(rep.failed("f phi = 0"));
    assert!(rep.failed("phi g = 0"));
    assert!(!delta_tilde_identity(&td, &perturb(&td).unwrap()).unwrap());
}

#[test]
fn special_replacement_restores_delta_tilde_identity() {
    let td = non_special_control();
    let phi = make_special(&td.f, &td.g, &td.phi, &td.source.dl).unwrap();
    assert!(check_special(&td.f, &td.g, &phi, &td.source.dl).all_pass());
    let special = TransferenceData { phi, ..td };
    assert!(delta_tilde_identity(&special, &perturb(&special).unwrap()).unwrap());
}

#[test]
fn homotopy_change_with_same_homotopy_is_identity() {
    for name in ["trivial-Q", "dual-numbers", "sign-twisted"] {
        let ops = derive_operators(&zoo_entry(name, 5).unwrap().structure).unwrap();
        let hc = homotopy_change_iso(&ops, ops.sp().unwrap()).unwrap();
        assert!(hc.report.all_pass(), "{name}:\n{}", hc.report);
        assert!(hc.f.equals(&GradedMap::identity(hc.f.source())), "{name}");
    }
}

#[test]
fn homotopy_change_with_extra_degeneracy() {
    for name in ["trivial-Q", "dual-numbers", "group-Z2-phi-e"] {
        let ops = derive_operators(&zoo_entry(name, 6).unwrap().structure).unwrap();
        let s_hat = alternative_homotopy(&ops).unwrap();
        let hc = homotopy_change_iso(&ops, &s_hat).unwrap();
        assert!(hc.report.all_pass(), "{name}:\n{}", hc.report);
    }
}

#[test]
fn delta_tilde_square_is_not_zero_on_dual_numbers() {
    let (_, pack) = setup("dual-numbers", 4);
    assert!(!pack.nu_nn.delta_tilde_square_zero);
    let (_, pack) = setup("trivial-Q", 4);
    assert!(pack.nu_nn.delta_tilde_square_zero);
}

#[test]
fn periodicity_on_trivial_module() {
    let (ctx, pack) = setup("trivial-Q", 6);
    let per = periodicity_s(&ctx, &pack).unwrap();
    assert!(per.report.all_pass(), "{}", per.report);
    assert_eq!(per.s.block_ref(2), &RationalMatrix::from_dense(&[vec![q(-1, 2)]]));
    assert!(per.uniqueness.iter().all(|&(_, d)| d <= 1));
    assert!(per.routes.iter().all(|r| r.map.is_some()));
}

#[test]
fn suite_names_round_trip() {
    for name in Suite::NAMES {
        let s: Suite = name.parse().unwrap();
        assert_eq!(s.to_string(), name);
    }
    assert!("bogus".parse::<Suite>().is_err());
    assert_eq!(Suite::All.expand().len(), 6);
}

#[test]
fn broken_structure_fails_axioms_without_panicking() {
    let mut cs = zoo_entry("trivial-Q", 3).unwrap().structure;
    cs.faces[2][0] = cs.faces[2][0].scale(&q(2, 1));
    let out = run_suite(Subject::structure(cs), Suite::All);
    assert!(!out.report.all_pass());
    assert!(out.report.failed("axioms: d_0 d_1 = d_0 d_0"));
}

#[test]
fn every_suite_passes_on_small_windows() {
    for name in EXAMPLE_NAMES {
        let out = run_suite(Subject::example(name, 3).unwrap(), Suite::All);
        assert!(out.report.all_pass(), "{name}:\n{}", out.report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn structure_file_round_trip(idx in 0..EXAMPLE_NAMES.len(), m in 2usize..5) {
        let cs = zoo_entry(EXAMPLE_NAMES[idx], m).unwrap().structure;
        let json = serde_json::to_string(&StructureFile::from_structure(&cs)).unwrap();
        let back = serde_json::from_str::<StructureFile>(&json).unwrap().into_structure().unwrap();
        prop_assert!(validate(&back).all_pass());
        let (a, b) = (derive_operators(&cs).unwrap(), derive_operators(&back).unwrap());
        prop_assert!(a.b.equals(&b.b));
        prop_assert!(a.big_t.equals(&b.big_t));
    }

    #[test]
    fn truncation_preserves_low_degrees(idx in 0..EXAMPLE_NAMES.len(), k in 2usize..4) {
        let cs = zoo_entry(EXAMPLE_NAMES[idx], 4).unwrap().structure;
        let (full, cut) = (derive_operators(&cs).unwrap(), derive_operators(&cs.truncate(k)).unwrap());
        for m in 0..=k {
            prop_assert_eq!(full.b.block_ref(m), cut.b.block_ref(m));
            prop_assert_eq!(full.n.block_ref(m), cut.n.block_ref(m));
        }
    }

    #[test]
    fn trivial_conversion_is_top_minus_half_bottom(a in -50i64..50, b in -50i64..50) {
        let (ctx, pack) = setup("trivial-Q", 3);
        let phi = Cochain { degree: 2, components: vec![vec![q(a, 1)], vec![q(b, 1)]] };
        let conv = convert_cocycle(&ctx, &pack, &phi).unwrap();
        prop_assert_eq!(conv.cyclic, vec![q(a, 1) - q(b, 2)]);
        prop_assert!(conv.report.all_pass());
    }

    #[test]
    fn random_cocycles_convert(seed in 0u64..1000, m in 0usize..4) {
        let (ctx, pack) = setup("sign-twisted", 4);
        let phi = random_cocycle(&ctx, &pack, m, seed).unwrap();
        let conv = convert_cocycle(&ctx, &pack, &phi).unwrap();
        prop_assert!(conv.report.all_pass(), "{}", conv.report);
    }
}
