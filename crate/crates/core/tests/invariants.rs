use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mctwist::dg::{check_dga, endomorphism_dga, vec_ops, HomSpace};
use mctwist::holonomy::{pexp, Matrix, SampledMatrixPath};
use mctwist::interval::build_interval_algebra;
use mctwist::linalg::cohomology;
use mctwist::mc::{gauge_act, is_mc, McElement};
use mctwist::perturbation::{is_minimal, minimal_model, tensor_one};
use mctwist::random::{random_degree_preserving, random_local_system, random_reduced_module};
use mctwist::simplicial::{
    boundary_delta, circle, cochain_algebra, delta, local_system_cohomology, mc_to_rep, rep_to_mc, SimplicialSet,
};
use mctwist::Ring;

fn ring(k: usize) -> Ring {
    [Ring::Integers, Ring::Rationals, Ring::prime_field(2).unwrap(), Ring::prime_field(7).unwrap()][k]
}

fn field(k: usize) -> Ring {
    [Ring::Rationals, Ring::prime_field(3).unwrap(), Ring::prime_field(5).unwrap()][k]
}

fn base(k: usize, size: usize) -> SimplicialSet {
    match k {
        0 => circle(size + 3),
        1 => delta(size % 4),
        _ => boundary_delta(2 + size % 2),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cochain_algebras_are_dgas(b in 0usize..3, size in 0usize..4, r in 0usize..4) {
        let x = base(b, size);
        let a = cochain_algebra(&x, ring(r), x.dim()).unwrap();
        let rep = check_dga(&a);
        prop_assert!(rep.is_ok());
        prop_assert_eq!(rep.not_checked, 0);
    }

    #[test]
    fn interval_algebras_are_spheres(n in 1usize..7, r in 0usize..3) {
        let k = build_interval_algebra(n, field(r)).unwrap();
        prop_assert!(check_dga(&k.dga).is_ok());
        let h = cohomology(&k.dga.complex()).unwrap();
        let want: Vec<usize> = (0..=n).map(|d| usize::from(d == 0 || d == n)).collect();
        prop_assert_eq!(h.ranks(), want);
    }

    #[test]
    fn local_systems_roundtrip(seed: u64, b in 0usize..3, size in 0usize..4, rank in 1usize..4, r in 0usize..3) {
        let x = base(b, size);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ls = random_local_system(&x, field(r), rank, &mut rng).unwrap();
        prop_assert!(ls.cocycle_violation().is_none());
        let m = rep_to_mc(&ls).unwrap();
        prop_assert!(m.is_mc());
        prop_assert_eq!(mc_to_rep(&x, &m).unwrap().monodromy, ls.monodromy.clone());
        // Euler characteristic of twisted cochains is rank times that of the base
        let h = local_system_cohomology(&ls).unwrap();
        let chi: i64 = h.ranks().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
        prop_assert_eq!(chi, rank as i64 * x.euler_characteristic());
    }

    #[test]
    fn gauge_action_preserves_mc(seed: u64, r in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = circle(3);
        let m = random_reduced_module(&x, field(r), 3, (0, 1), &mut rng).unwrap();
        prop_assume!(!m.v().is_empty());
        let end = Arc::new(endomorphism_dga(&m.module.alg, m.v()).unwrap());
        let mc = McElement::new(end.clone(), m.module.x.clone()).unwrap();
        let space = HomSpace::new(m.v().clone(), m.v().clone(), m.module.alg.clone());
        let g = tensor_one(&space, &random_degree_preserving(m.v(), &mut rng));
        let moved = gauge_act(&end, &g, &mc).unwrap();
        prop_assert!(is_mc(&end, &moved.value).unwrap().mc);
        let h = cohomology(&m.module.complex()).unwrap();
        let again = mctwist::dg::TwistedModule::new(m.v().clone(), m.module.alg.clone(), moved.value).unwrap();
        prop_assert!(again.cohomology().unwrap().same_groups(&h));
    }

    #[test]
    fn minimal_models_keep_cohomology(seed: u64, b in 0usize..2, r in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = base(b, 0);
        let m = random_reduced_module(&x, field(r), 5, (-2, 2), &mut rng).unwrap();
        let mm = minimal_model(&m).unwrap();
        prop_assert!(is_minimal(&mm.module));
        prop_assert!(vec_ops::is_zero(&mm.module.mc_residual()));
        prop_assert!(mm.verify(&m).unwrap().is_ok());
        prop_assert!(mm.module.cohomology().unwrap().same_groups(&m.module.cohomology().unwrap()));
    }

    #[test]
    fn transport_determinant_follows_trace(a in proptest::array::uniform4(-1.0f64..1.0), b in proptest::array::uniform4(-1.0f64..1.0)) {
        let ma = Matrix::from_row_slice(2, 2, &a);
        let mb = Matrix::from_row_slice(2, 2, &b);
        let y = SampledMatrixPath::from_fn(400, |t| &ma + &mb * t).unwrap();
        let g = pexp(&y, 1.0).unwrap().matrix;
        let want = (ma.trace() + mb.trace() / 2.0).exp();
        prop_assert!((g.determinant() - want).abs() <= 1e-9 * want.max(1.0));
    }
}
