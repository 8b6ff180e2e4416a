use std::sync::Arc;

use ltphi_core::lubin_tate::LubinTateData;
use ltphi_core::padic::PadicScalar;
use ltphi_core::phigamma::{PhiGammaModule, TwistCharacter};
use ltphi_core::twist::{compute_constants, construct_twist_character, run_pipeline, verify_twist, RootObligation};

fn std9() -> Arc<LubinTateData> {
    Arc::new(LubinTateData::standard(3, 2, 12).unwrap())
}

#[test]
fn frobenius_pipeline_passes() {
    let lt = std9();
    let ctx = lt.ctx();
    let m = PhiGammaModule::rank1_from_character(lt.clone(), &TwistCharacter::frobenius(ctx).unwrap(), 20).unwrap();
    let r = run_pipeline(&m).unwrap();
    eprintln!("{}", serde_json::to_string(&r).unwrap());
    assert!(r.passed());
    assert!(r.root_obligations.is_empty());
    let fail = verify_twist(&m, &TwistCharacter::trivial(ctx)).unwrap();
    assert!(!fail.passed());
}

#[test]
fn deferred_root_pipeline() {
    let lt = std9();
    let ctx = lt.ctx();
    let c = PadicScalar::from_ratio(ctx, 2, 3, 39).unwrap();
    let zero = PadicScalar::zero(ctx, 39);
    let d0 = construct_twist_character(&[zero, c], None).unwrap();
    assert_eq!(d0.root_obligations(), vec![(2, 3)]);
    let m = PhiGammaModule::trivial(lt.clone(), 20).unwrap().twist(&d0).unwrap();
    let cm = compute_constants(&m, None).unwrap();
    eprintln!("{} vs {}", cm[1], c);
    assert!(cm[1].add(&c).is_zero());
    let r = run_pipeline(&m).unwrap();
    assert!(r.passed());
    assert_eq!(r.root_obligations, vec![RootObligation { generator: 2, e: 3 }]);
}
