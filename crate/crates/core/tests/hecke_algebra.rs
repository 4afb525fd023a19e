//! The p-adic pipeline against the exact integral algebra and other independent routes.

use eisrank::hecke::{
    build_integral_hecke_algebra, compute_point, eisenstein_eigenvalue, eisenstein_index, eisenstein_rank,
    min_generators_eis, tangent_dim_t, weight_stabilization_check, HeckeAlgebraData, HeckeConfig,
};
use eisrank::invariants::{predict, ParameterPoint};
use eisrank::linalg::{common_generalized_kernel, restrict};
use eisrank::modsym::dim_cusp_forms;
use eisrank::{FpMatrix, Pir, PrimeField};

const EXACT_POINTS: [(u64, u64, u32); 8] =
    [(5, 11, 2), (5, 11, 6), (5, 31, 2), (5, 41, 2), (7, 29, 2), (7, 29, 4), (7, 43, 2), (13, 53, 2)];

#[test]
fn integral_algebra_reproduces_the_padic_invariants() {
    let cfg = HeckeConfig::default();
    for (p, l, k) in EXACT_POINTS {
        let (_, _, rep) = compute_point(p, l, k, &cfg).unwrap();
        let z = build_integral_hecke_algebra(l, k, cfg.resource_bound, 11).unwrap();
        assert_eq!(z.dim(), dim_cusp_forms(l, k));
        assert_eq!(z.closure_rank().unwrap(), z.dim(), "({p},{l},{k})");
        assert_eq!(z.eisenstein_index_exact(p).unwrap(), rep.index_valuation, "({p},{l},{k})");
        let a = z.to_padic(p, 12).unwrap();
        assert_eq!(eisenstein_rank(&a).unwrap(), rep.rank, "({p},{l},{k})");
        let q = eisenstein_index(&a).unwrap();
        assert_eq!(q.valuation, rep.index_valuation);
        assert_eq!(min_generators_eis(&a, q.valuation).unwrap(), rep.min_gens, "({p},{l},{k})");
        assert_eq!(Some(tangent_dim_t(&a, &q).unwrap()), rep.tangent_dim_t, "({p},{l},{k})");
    }
}

fn mod_p_eisenstein(alg: &HeckeAlgebraData) -> Vec<FpMatrix> {
    let f = PrimeField::new(alg.p).unwrap();
    let r = alg.ring;
    alg.generators
        .iter()
        .zip(&alg.matrices)
        .map(|(g, m)| {
            let x = m.shift(&eisenstein_eigenvalue(&r, g, alg.weight));
            x.convert(&f, |a| r.reduce_to_fp(a, alg.p))
        })
        .collect()
}

#[test]
fn localization_is_idempotent() {
    for (p, l, k) in [(5u64, 31u64, 2u32), (5, 31, 6), (7, 29, 4), (5, 181, 2)] {
        let (_, alg, rep) = compute_point(p, l, k, &HeckeConfig::default()).unwrap();
        let xs = mod_p_eisenstein(&alg);
        let v = common_generalized_kernel(&xs, alg.dim()).unwrap();
        assert_eq!(v.dim(), rep.rank);
        let local: Vec<FpMatrix> = xs.iter().map(|x| restrict(x, &v).unwrap()).collect();
        let again = common_generalized_kernel(&local, v.dim()).unwrap();
        assert_eq!(again.dim(), v.dim(), "({p},{l},{k})");
        // Each generator is nilpotent on the local factor.
        for x in &local {
            assert!(x.pow(v.dim() as u64).is_zero());
        }
    }
}

#[test]
fn rank_and_principality_at_reference_points() {
    let cfg = HeckeConfig { full_space_check: true, cuspidal_check: true, ..Default::default() };
    // (p, ℓ, k, rank > 1, principal)
    for (p, l, k, big, principal) in [
        (5u64, 11u64, 2u32, false, true),
        (5, 31, 2, true, true),
        (7, 29, 2, false, true),
        (7, 29, 4, false, true),
        (5, 31, 6, true, false),
        (7, 43, 8, true, false),
    ] {
        let (_, _, rep) = compute_point(p, l, k, &cfg).unwrap();
        let pt = ParameterPoint::new(p, l, k).unwrap();
        let pred = predict(&pt).unwrap();
        assert_eq!(rep.rank > 1, big, "({p},{l},{k}) rank {}", rep.rank);
        assert_eq!(pred.rank_gt_1_predicted, big);
        assert_eq!(rep.min_gens == 1, principal, "({p},{l},{k})");
        assert_eq!(pred.eis_principal_predicted, principal);
        assert_eq!(rep.index_valuation, pt.predicted_index());
        assert_eq!(rep.tangent_dim_t, Some(rep.min_gens));
        assert_eq!(rep.full_space_tangent, rep.tangent_dim_t);
        assert_eq!(rep.cuspidal_aligned, Some(true));
        assert_eq!(rep.flatness_rank, Some(rep.rank));
        assert_eq!(rep.module_rank, rep.rank);
    }
}

#[test]
fn weight_stabilizes_along_p_minus_one() {
    let w = weight_stabilization_check(7, 29, 4, 10, &HeckeConfig::default()).unwrap();
    assert!(w.equal, "{w:?}");
    assert!(weight_stabilization_check(5, 11, 2, 6, &HeckeConfig::default()).is_err());
    assert!(weight_stabilization_check(7, 29, 4, 8, &HeckeConfig::default()).is_err());
}

#[test]
fn points_without_an_eisenstein_congruence() {
    let (_, _, rep) = compute_point(7, 11, 2, &HeckeConfig::default()).unwrap();
    assert_eq!(rep.rank, 0);
    assert!(!rep.nonzero_localization);
}
