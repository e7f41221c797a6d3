use igusa_core::engine::{EngineMode, ModeRequest, ZetaEngine};
use igusa_core::oracle::{compare_series, twisted_coeffs, OracleDomain};
use igusa_core::padic::{Character, PAdicContext};
use igusa_core::report::RunConfig;

const CAP: u64 = 10_000_000;

fn engine(poly: &str, p: u64, order: u32) -> (ZetaEngine, Character) {
    let cfg = RunConfig::new(poly, p);
    let chi = if order == 1 {
        Character::trivial(p)
    } else {
        Character::new(p, order, 1).unwrap()
    };
    let e = ZetaEngine::new(cfg.polynomial().unwrap(), PAdicContext::new(p).unwrap(), chi.clone()).unwrap();
    (e, chi)
}

fn assert_oracle(poly: &str, p: u64, order: u32, mode: ModeRequest, k: usize) -> EngineMode {
    let (e, chi) = engine(poly, p, order);
    let res = e.zeta_full(mode).unwrap();
    let prefix = twisted_coeffs(e.polynomial(), &chi, k, &OracleDomain::All, CAP).unwrap();
    let cmp = compare_series(&res.total, &prefix);
    assert!(cmp.matches(), "{poly} at p={p}, order {order}: {}", cmp.to_json());
    res.mode
}

#[test]
fn bad_reduction_goes_through_recursion() {
    assert_eq!(assert_oracle("x^2+3*y^2", 3, 1, ModeRequest::Auto, 10), EngineMode::B);
    assert_eq!(assert_oracle("x^2+2*x*y+8*y^2", 7, 1, ModeRequest::Auto, 6), EngineMode::B);
    assert_eq!(assert_oracle("x^3+5*y^2", 5, 1, ModeRequest::Auto, 8), EngineMode::B);
}

#[test]
fn modes_agree_on_good_reduction() {
    for (poly, p) in [("x^2*y^2+x^5+y^5", 7), ("x^2+x*y+y^2", 7), ("x*y+x^3+y^3", 5), ("x^2+y^3", 5)] {
        let (e, _) = engine(poly, p, 1);
        let a = e.zeta_full(ModeRequest::A).unwrap().total;
        let b = e.zeta_full(ModeRequest::B).unwrap().total;
        assert!(a.equals(&b), "{poly} at p={p}");
    }
}

#[test]
fn twisted_values() {
    // χ² = 1 on every unit, so x² sees only the trivial part.
    assert_oracle("x^2", 5, 2, ModeRequest::Auto, 8);
    assert_oracle("x^3", 7, 3, ModeRequest::Auto, 8);
    assert_oracle("x^2+y^3", 7, 2, ModeRequest::Auto, 6);
    assert_oracle("x^2+x*y+y^2", 7, 3, ModeRequest::Auto, 5);
}
