use std::sync::{Arc, OnceLock};

use hecke_core::quiver::{random_path, Rewriter};
use hecke_core::{CoxeterSystem, GroupElement, HasseQuiver, HeckeElement, IntPoly, Path, PathElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn a3() -> &'static HasseQuiver {
    static Q: OnceLock<HasseQuiver> = OnceLock::new();
    Q.get_or_init(|| HasseQuiver::from_system(Arc::new(CoxeterSystem::from_type("A3").unwrap())))
}

fn i2_5() -> &'static HasseQuiver {
    static Q: OnceLock<HasseQuiver> = OnceLock::new();
    Q.get_or_init(|| HasseQuiver::from_system(Arc::new(CoxeterSystem::from_type("I2(5)").unwrap())))
}

fn element() -> impl Strategy<Value = HeckeElement> {
    let term = (0u32..24, proptest::collection::vec(-4i64..5, 0..3));
    proptest::collection::vec(term, 0..4).prop_map(|ts| {
        HeckeElement::from_terms(ts.into_iter().map(|(w, c)| (GroupElement(w), IntPoly::from_coeffs(&c))))
    })
}

fn path(q: &HasseQuiver, seed: u64, len: usize) -> Path {
    random_path(q, len, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hecke_product_is_associative(a in element(), b in element(), c in element()) {
        let h = a3().hecke();
        prop_assert_eq!(h.t_mul(&h.t_mul(&a, &b), &c), h.t_mul(&a, &h.t_mul(&b, &c)));
    }

    #[test]
    fn iota_reverses_products(a in element(), b in element()) {
        let h = a3().hecke();
        let sys = h.system();
        prop_assert_eq!(h.t_mul(&a, &b).iota(sys), h.t_mul(&b.iota(sys), &a.iota(sys)));
        prop_assert_eq!(a.iota(sys).iota(sys), a);
    }

    #[test]
    fn paths_print_and_parse_back(seed in any::<u64>()) {
        let p = path(a3(), seed, 8);
        prop_assert_eq!(Path::parse(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(p.tau().tau(), p);
    }

    #[test]
    fn fast_evaluation_matches_composition(seed in any::<u64>()) {
        let q = a3();
        let p = path(q, seed, 6);
        prop_assert_eq!(q.eval_path(&p), q.eval_path_composed(&p).unwrap());
    }

    #[test]
    fn evaluation_is_multiplicative(s1 in any::<u64>(), steps in proptest::collection::vec(any::<prop::sample::Index>(), 0..5)) {
        let q = i2_5();
        let a = path(q, s1, 5);
        let mut b = Path::trivial(a.end);
        for ix in steps {
            let options: Vec<_> = q.arrows_from(b.end).collect();
            b = b.then(*ix.get(&options)).unwrap();
        }
        let composed = q.eval_path(&b.compose(&a).unwrap());
        let by_homs = q.endo().compose(&q.eval_path(&b), &q.eval_path(&a)).unwrap();
        prop_assert_eq!(composed, by_homs);
    }

    #[test]
    fn rewriting_is_sound_and_idempotent(seed in any::<u64>()) {
        for q in [a3(), i2_5()] {
            let rw = Rewriter::new(q).unwrap();
            let p = PathElement::from_path(path(q, seed, 10));
            let (out, _) = rw.rewrite_to_standard(&p).unwrap();
            prop_assert!(rw.is_standard(&out));
            prop_assert_eq!(q.eval(&out), q.eval(&p));
            let (again, _) = rw.rewrite_to_standard(&out).unwrap();
            prop_assert_eq!(again, out);
        }
    }
}
