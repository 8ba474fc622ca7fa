use paracyc::builders::{build_double_natural, build_lambda, build_natural, parachain_report, quasi_mixed_pack};
use paracyc::cyclic::{derive_operators, validate};
use paracyc::para_s::{check_para_s, quasi_split};
use paracyc::zoo::{zoo_entry, EXAMPLE_NAMES};

const M: usize = 4;

#[test]
fn derived_identities_hold_on_every_example() {
    for name in EXAMPLE_NAMES {
        let cs = zoo_entry(name, M).unwrap().structure;
        assert!(validate(&cs).all_pass());
        let ops = derive_operators(&cs).unwrap();
        let rep = ops.check_identities();
        assert!(rep.all_pass(), "{name}:\n{rep}");
        let rep = parachain_report(&ops).unwrap();
        assert!(rep.all_pass(), "{name}:\n{rep}");
    }
}

#[test]
fn natural_and_double_natural_are_para_s_modules() {
    for name in EXAMPLE_NAMES {
        let cs = zoo_entry(name, M).unwrap().structure;
        let ops = derive_operators(&cs).unwrap();
        let nat = build_natural(&ops.b, &ops.operator_b().unwrap(), &ops.big_t).unwrap();
        let rep = check_para_s(&nat.psm());
        assert!(rep.all_pass(), "{name} natural:\n{rep}");
        let nn = build_double_natural(&cs).unwrap();
        let rep = nn.check();
        assert!(rep.all_pass(), "{name} double:\n{rep}");
        let rep = check_para_s(&nn.psm());
        assert!(rep.all_pass(), "{name} double psm:\n{rep}");
        build_lambda(&ops).unwrap();
    }
}

#[test]
fn quasi_examples_split_and_pack() {
    for name in EXAMPLE_NAMES {
        let e = zoo_entry(name, M).unwrap();
        let ops = derive_operators(&e.structure).unwrap();
        let poly = e.quasi_polynomial().unwrap();
        let split = quasi_split(&ops.big_t, Some(&poly)).unwrap();
        let rep = split.check(&ops.big_t);
        assert!(rep.all_pass(), "{name}:\n{rep}");
        let pack = quasi_mixed_pack(&ops, &split, e.r_cyclic).unwrap();
        assert!(pack.report.all_pass(), "{name}:\n{}", pack.report);
    }
}
