//! Dual subsystems, tilde subsystems and mode partners across the public API.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use susyent::duality::{check_duality, dual_subsystem};
use susyent::linalg::{self, Mat};
use susyent::models::{
    build_honeycomb, build_two_mode, parallelogram_cells, random_supercharge, HoneycombParams, TwoModeParams,
};
use susyent::subsystem::{mode_partners, normalize_dual_basis, tilde_subsystem};
use susyent::{build_susy, identify, restrict, Error, MapChoice, Statistics, Subsystem, SusySystem};

fn two_mode(r_b: f64, r_f: f64) -> SusySystem {
    build_susy(&build_two_mode(&TwoModeParams { r_b, r_f }).unwrap()).unwrap()
}

/// Largest distance of a column of `b` from `span(a)`.
fn span_distance(a: &Mat, b: &Mat) -> f64 {
    let q = a.clone().qr().q();
    let b = linalg::column_space(b, 1e-12);
    linalg::max_abs(&(&b - &q * (q.transpose() * &b)))
}

fn same_span(a: &Mat, b: &Mat) -> bool {
    a.ncols() == b.ncols() && span_distance(a, b) < 1e-9 && span_distance(b, a) < 1e-9
}

#[test]
fn two_mode_site_duals() {
    for r_f in [0.0, 0.1, 0.3, 0.5, 0.7] {
        let sys = two_mode(0.3, r_f);
        let site = Subsystem::from_sites(Statistics::Fermionic, 2, &[0]).unwrap();
        let rep = check_duality(&sys, &site, MapChoice::L1Inv).unwrap();
        let (lf, lb, product) = rep.pairs[0];
        assert!((lf - (2.0 * r_f).cos()).abs() < 1e-12);
        assert!((lb - 1.0 / (2.0 * r_f).cos()).abs() < 1e-10);
        assert!((product - 1.0).abs() < 1e-10);
    }
}

#[test]
fn maximal_entanglement_has_no_dual() {
    let sys = two_mode(0.2, std::f64::consts::FRAC_PI_4 - 1e-13);
    let site = Subsystem::from_sites(Statistics::Fermionic, 2, &[0]).unwrap();
    for map in [MapChoice::L1Inv, MapChoice::L2] {
        assert!(matches!(check_duality(&sys, &site, map), Err(Error::MaximallyEntangledObstruction { .. })));
    }
    // The bosonic direction has no obstruction.
    let bsite = Subsystem::from_sites(Statistics::Bosonic, 2, &[0]).unwrap();
    assert!(check_duality(&sys, &bsite, MapChoice::L1).is_ok());
}

#[test]
fn unsqueezed_identification_is_site_to_site() {
    let sys = two_mode(0.0, 0.0);
    let site = Subsystem::from_sites(Statistics::Fermionic, 2, &[1]).unwrap();
    let image = dual_subsystem(&sys, &site, MapChoice::L1Inv).unwrap();
    let partner = Subsystem::from_sites(Statistics::Bosonic, 2, &[1]).unwrap();
    assert!(same_span(image.basis(), partner.basis()));
    let wrong = Subsystem::from_sites(Statistics::Bosonic, 2, &[1]).unwrap();
    assert!(matches!(dual_subsystem(&sys, &wrong, MapChoice::L1Inv), Err(Error::Incompatible(_))));
}

#[test]
fn tilde_subsystems() {
    // Pure on-site subsystem: J(A) = A.
    let sys = two_mode(0.0, 0.0);
    let site = Subsystem::from_sites(Statistics::Bosonic, 2, &[0]).unwrap();
    let tilde = tilde_subsystem(sys.j_b(), &site).unwrap();
    assert!(same_span(tilde.basis(), site.basis()));

    // Squeezed: J(A) leaves A but carries the same spectrum.
    let sys = two_mode(0.3, 0.0);
    let tilde = tilde_subsystem(sys.j_b(), &site).unwrap();
    assert!(span_distance(site.basis(), tilde.basis()) > 0.1);
    let lambda = restrict(sys.j_b(), &tilde).unwrap().lambdas[0];
    assert!((lambda - 0.6f64.cosh()).abs() < 1e-10);
}

#[test]
fn identification_commutes_with_tilde() {
    // L1 J_b = J_f L1, so L1 applied to J_b(A) spans J_f(L1 A).
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sys = build_susy(&random_supercharge(4, &mut rng).unwrap()).unwrap();
    let a = Subsystem::from_sites(Statistics::Bosonic, 4, &[0, 2]).unwrap();
    let path_one = identify(MapChoice::L1, &sys, tilde_subsystem(sys.j_b(), &a).unwrap().basis()).unwrap();
    let image = dual_subsystem(&sys, &a, MapChoice::L1).unwrap();
    let path_two = tilde_subsystem(sys.j_f(), &image).unwrap();
    assert!(same_span(&path_one, path_two.basis()));
}

#[test]
fn partners_purify_their_modes() {
    let sys = two_mode(0.0, 0.0);
    let site = Subsystem::from_sites(Statistics::Fermionic, 2, &[0]).unwrap();
    assert!(mode_partners(sys.j_f(), &site).unwrap().is_empty());

    let sys = two_mode(0.3, 0.25);
    for (state, stats) in [(sys.j_b(), Statistics::Bosonic), (sys.j_f(), Statistics::Fermionic)] {
        let site = Subsystem::from_sites(stats, 2, &[0]).unwrap();
        let partners = mode_partners(state, &site).unwrap();
        assert_eq!(partners.len(), 1);
        let p = &partners[0];
        let mut joint = Mat::zeros(4, 4);
        joint.columns_mut(0, 2).copy_from(&p.mode);
        joint.columns_mut(2, 2).copy_from(&p.partner);
        let joint = Subsystem::from_basis(stats, joint, "mode + partner").unwrap();
        assert!(restrict(state, &joint).unwrap().lambdas.iter().all(|&l| (l - 1.0).abs() < 1e-9));
    }
}

#[test]
fn strong_link_partners_hug_the_boundary() {
    let p = HoneycombParams { l1: 10, l2: 10, j: (1.0, 1.0, 2.5) };
    let sys = build_susy(&build_honeycomb(&p).unwrap()).unwrap();
    let cells = parallelogram_cells(&p, 3, (2, 2)).unwrap();
    let sub = Subsystem::from_sites(Statistics::Fermionic, p.n_cells(), &cells).unwrap();
    let partners = mode_partners(sys.j_f(), &sub).unwrap();
    // The three strongly entangled modes sit on cut z-links.
    let strong: Vec<_> = partners.iter().filter(|m| m.lambda < 0.5).collect();
    assert_eq!(strong.len(), 3);
    let torus = |a: usize, b: usize, l: usize| a.abs_diff(b).min(l - a.abs_diff(b));
    let near = |c: usize| {
        let (x, y) = (c % p.l1, c / p.l1);
        cells.iter().any(|&a| torus(x, a % p.l1, p.l1).max(torus(y, a / p.l1, p.l2)) <= 2)
    };
    let n = p.n_cells();
    for m in strong {
        let total: f64 = m.partner.iter().map(|x| x * x).sum();
        let far: f64 = (0..n)
            .filter(|&c| !near(c))
            .map(|c| m.partner.row(c).norm_squared() + m.partner.row(n + c).norm_squared())
            .sum();
        assert!(far < 0.05 * total, "{}", far / total);
    }
}

#[test]
fn normalised_duals_have_standard_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sys = build_susy(&random_supercharge(5, &mut rng).unwrap()).unwrap();
    for (stats, map) in [(Statistics::Fermionic, MapChoice::L1Inv), (Statistics::Bosonic, MapChoice::L1)] {
        let sub = Subsystem::from_sites(stats, 5, &[1, 3, 4]).unwrap();
        let dual = normalize_dual_basis(&dual_subsystem(&sys, &sub, map).unwrap()).unwrap();
        let form = dual.restricted_form().unwrap();
        let standard = match map.target() {
            Statistics::Bosonic => linalg::standard_omega(3),
            Statistics::Fermionic => Mat::identity(6, 6),
        };
        assert!(linalg::max_abs_diff(&form, &standard) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn duality_holds_for_random_site_subsets(
        seed in any::<u64>(),
        n in 2usize..7,
        mask in 1u32..127,
        map_index in 0usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = build_susy(&random_supercharge(n, &mut rng).unwrap()).unwrap();
        let sites: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!sites.is_empty() && sites.len() < n);
        let map = [MapChoice::L1, MapChoice::L2, MapChoice::L1Inv, MapChoice::L2Inv][map_index];
        let sub = Subsystem::from_sites(map.source(), n, &sites).unwrap();
        let rep = check_duality(&sys, &sub, map).unwrap();
        prop_assert_eq!(rep.pairs.len(), sites.len());
        prop_assert!(rep.max_product_deviation < 1e-8, "{}", rep.max_product_deviation);
        prop_assert!(rep.matrix_residual < 1e-7);
    }
}
