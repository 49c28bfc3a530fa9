use ffgeom::geometry::sphere_points;
use ffgeom::harness::random_point_set;
use ffgeom::incidence::{
    nu_profile, nu_profile_spectral, orthogonal_triples, orthogonal_triples_brute, verify_l2_bound,
    verify_pointwise_bound,
};
use ffgeom::spectral::{fourier_invert, fourier_transform, fourier_transform_direct, indicator, SphereTransform};
use ffgeom::{Field, PointSet, Space};
use num_complex::Complex64;
use proptest::prelude::*;

const FIELDS: [(u64, u32); 6] = [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (5, 2)];

fn field_strategy() -> impl Strategy<Value = Field> {
    (0..FIELDS.len()).prop_map(|i| Field::new(FIELDS[i].0, FIELDS[i].1, None).unwrap())
}

/// A field, d in {2, 3} with q^d <= 400, and a random nonempty set.
fn set_strategy() -> impl Strategy<Value = PointSet> {
    (field_strategy(), 2usize..=3, any::<u64>(), 0.0f64..1.0).prop_filter_map("space too large", |(f, d, seed, frac)| {
        let space = Space::new(&f, d).ok()?;
        if space.size() > 400 {
            return None;
        }
        let size = 1 + (frac * (space.size() - 1) as f64) as usize;
        random_point_set(&space, size, seed).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(f in field_strategy(), i in 0usize..121, j in 0usize..121, k in 0usize..121) {
        let q = f.q();
        let (a, b, c) = (f.element(i % q).unwrap(), f.element(j % q).unwrap(), f.element(k % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        if let Some(inv) = f.inv(a) {
            prop_assert_eq!(f.mul(a, inv), f.one());
        } else {
            prop_assert!(a.is_zero());
        }
        let s = f.square(a);
        prop_assert_eq!(f.sqrt(s).map(|r| f.square(r)), Some(s));
    }

    #[test]
    fn nu_sums_to_pairs(set in set_strategy()) {
        let profile = nu_profile(&set).unwrap();
        let total: u64 = profile.nu().iter().sum();
        prop_assert_eq!(total, (set.len() * set.len()) as u64);
    }

    #[test]
    fn nu_matches_character_identity(set in set_strategy().prop_filter("small", |s| s.len() <= 40)) {
        let exact = nu_profile(&set).unwrap();
        let spectral = nu_profile_spectral(&set).unwrap();
        for (a, b) in exact.nu().iter().zip(&spectral) {
            prop_assert!((*a as f64 - b).abs() < 1e-6);
        }
    }

    #[test]
    fn orthogonal_triples_agree(set in set_strategy().prop_filter("small", |s| s.len() <= 30)) {
        prop_assert_eq!(orthogonal_triples(&set).unwrap(), orthogonal_triples_brute(&set).unwrap());
    }

    #[test]
    fn incidence_bounds_hold(set in set_strategy()) {
        let pw = verify_pointwise_bound(&set).unwrap();
        prop_assert!(pw.all_pass, "{}", pw.report);
        let l2 = verify_l2_bound(&set).unwrap();
        prop_assert!(l2.report.pass, "{}", l2.report);
        prop_assert!(l2.intermediate.pass, "{}", l2.intermediate);
        prop_assert!(l2.identity_relative_error < 1e-9);
    }

    #[test]
    fn fourier_inverts_and_satisfies_parseval(set in set_strategy()) {
        let space = set.space();
        let f = indicator(&set);
        let table = fourier_transform(space, &f).unwrap();
        let back = fourier_invert(&table);
        for (a, b) in f.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-9);
        }
        let energy: f64 = table.values().iter().map(Complex64::norm_sqr).sum();
        let expected = set.len() as f64 / space.size() as f64;
        prop_assert!((energy - expected).abs() < 1e-9);
    }

    #[test]
    fn separable_matches_direct(set in set_strategy().prop_filter("small space", |s| s.space().size() <= 125)) {
        let f = indicator(&set);
        let fast = fourier_transform(set.space(), &f).unwrap();
        let slow = fourier_transform_direct(set.space(), &f).unwrap();
        for (a, b) in fast.values().iter().zip(slow.values()) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn sphere_closed_form(f in field_strategy(), d in 2usize..=3, r in 0i64..13) {
        let space = Space::new(&f, d).unwrap();
        prop_assume!(space.size() <= 400);
        let radius = f.from_int(r);
        let sphere = sphere_points(&space, radius);
        let table = fourier_transform(&space, &indicator(&sphere.points)).unwrap();
        let closed = SphereTransform::new(&space, radius).unwrap().eval_all();
        for (a, b) in table.values().iter().zip(&closed) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn coords_round_trip(set in set_strategy()) {
        let back = PointSet::from_coords(set.space(), &set.to_coords()).unwrap();
        prop_assert_eq!(back, set);
    }
}
