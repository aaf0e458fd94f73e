//! Property tests for the exact layers: polynomials, Renegar chains and
//! linear matrix polynomials.

use nalgebra::SymmetricEigen;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectra_core::linmat::{
    char_poly_coeffs, char_poly_coeffs_cofactor, eval_pencil, exposing_functional, face_of_point, is_psd_exact,
    spectrahedron_member, FaceStatus, LinMatPoly, QMatrix,
};
use spectra_core::poly::rational::{int, rat, to_f64};
use spectra_core::poly::{all_roots_real, count_real_roots, root_multiplicity, Interval, Monomial};
use spectra_core::reproduce::random_pencil;
use spectra_core::rigidconv::{
    basic_closed_description, check_rz, default_directions, exposing_tangent, homogeneous_renegar,
    hyperbolicity_cone_member, in_basic_closed, mult, mult_via_homogenization,
};
use spectra_core::{example1, MPoly, Rational, UPoly};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rat(), n)
}

/// Polynomial in two variables of degree <= 4.
fn poly2() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((0u32..3, 0u32..3, small_rat()), 1..6).prop_map(|terms| {
        MPoly::from_terms(2, terms.into_iter().map(|(a, b, c)| (Monomial::new(vec![a, b]), c)))
    })
}

/// `c + g . t` with `c > 0`: positive at the origin.
fn positive_form() -> impl Strategy<Value = MPoly> {
    (1i64..=4, point(2)).prop_map(|(c, g)| MPoly::affine(int(c), &g))
}

fn product(forms: &[MPoly]) -> MPoly {
    forms.iter().fold(MPoly::one(forms[0].nvars()), |acc, f| &acc * f)
}

fn upoly_from_roots(roots: &[(Rational, u32)]) -> UPoly {
    let mut q = UPoly::constant(int(1));
    for (r, m) in roots {
        for _ in 0..*m {
            q = &q * &UPoly::linear_root(r);
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn restriction_commutes_with_evaluation(p in poly2(), x in point(2), v in point(2), s0 in small_rat()) {
        prop_assume!(v.iter().any(|c| !c.is_zero()));
        let y: Vec<Rational> = x.iter().zip(&v).map(|(a, b)| a + &s0 * b).collect();
        let q = p.restrict_line(&x, &v).unwrap();
        prop_assert_eq!(p.eval(&y).unwrap(), q.eval(&s0));
    }

    #[test]
    fn homogenize_then_dehomogenize(p in poly2(), extra in 0u32..3) {
        let d = p.degree().finite().unwrap_or(0) + extra;
        prop_assert_eq!(p.homogenize(d).unwrap().dehomogenize(), p);
    }

    #[test]
    fn root_counts_match_construction(
        roots in proptest::collection::btree_map(-8i64..=8, 1u32..4, 1..5),
        complex in proptest::option::of(1i64..5),
    ) {
        let roots: Vec<(Rational, u32)> = roots.into_iter().map(|(r, m)| (rat(r, 2), m)).collect();
        let mut q = upoly_from_roots(&roots);
        if let Some(c) = complex {
            q = &q * &UPoly::new(vec![int(c), int(0), int(1)]);
        }
        prop_assert_eq!(all_roots_real(&q).unwrap(), complex.is_none());
        if complex.is_none() {
            let n = count_real_roots(&q, &Interval::real_line()).unwrap();
            prop_assert_eq!(n, roots.len());
            prop_assert_eq!(q.squarefree_part().degree().finite().unwrap() as usize, n);
        }
        let mut total = 0;
        for (r, m) in &roots {
            prop_assert_eq!(root_multiplicity(&q, r).unwrap(), *m);
            total += m;
        }
        prop_assert!(total <= q.degree().finite().unwrap());
        let off = rat(1, 3);
        prop_assert_eq!(root_multiplicity(&q, &off).unwrap() >= 1, q.eval(&off).is_zero());
    }

    #[test]
    fn products_of_positive_forms_are_real_zero(forms in proptest::collection::vec(positive_form(), 1..4)) {
        let p = product(&forms);
        let r = check_rz(&p, &[int(0), int(0)], &default_directions(2, 16)).unwrap();
        prop_assert!(r.overall);
    }

    #[test]
    fn rigidly_convex_sets_nest(forms in proptest::collection::vec(positive_form(), 2..4), x in point(2)) {
        let p = product(&forms);
        let p1 = spectra_core::rigidconv::renegar_derivative(&p, 1).unwrap();
        let s0 = basic_closed_description(&p).unwrap();
        let s1 = basic_closed_description(&p1).unwrap();
        if in_basic_closed(&s0, &x).unwrap() {
            prop_assert!(in_basic_closed(&s1, &x).unwrap());
        }
    }

    #[test]
    fn hyperbolicity_cones_nest(forms in proptest::collection::vec(positive_form(), 2..4), x in point(3)) {
        let p = product(&forms);
        let d = p.degree().finite().unwrap();
        let big = p.homogenize(d).unwrap();
        let e = vec![int(0), int(0), int(1)];
        for k in 0..d - 1 {
            let pk = homogeneous_renegar(&big, &e, k).unwrap();
            let pk1 = homogeneous_renegar(&big, &e, k + 1).unwrap();
            if hyperbolicity_cone_member(&pk, &e, &x).unwrap() {
                prop_assert!(hyperbolicity_cone_member(&pk1, &e, &x).unwrap(), "k = {}", k);
            }
        }
    }

    /// `p` is a product of lines, `through` of which pass through `x`; each
    /// contributes one root of `s -> p(s x)` at `s = 1`.
    #[test]
    fn multiplicity_counts_lines_through_point(
        x in point(2),
        normals in proptest::collection::vec(point(2), 1..4),
        others in proptest::collection::vec(positive_form(), 0..3),
    ) {
        let dot = |g: &[Rational]| &g[0] * &x[0] + &g[1] * &x[1];
        prop_assume!(normals.iter().all(|g| !dot(g).is_zero()));
        prop_assume!(others.iter().all(|f| !f.eval(&x).unwrap().is_zero()));
        let through: Vec<MPoly> = normals.iter().map(|g| MPoly::affine(-dot(g), g)).collect();
        let mut forms = through.clone();
        forms.extend(others);
        let p = product(&forms);
        let m = mult(&p, &x).unwrap();
        prop_assert_eq!(m as usize, through.len());
        prop_assert_eq!(mult_via_homogenization(&p, &x).unwrap(), m);
    }

    #[test]
    fn char_poly_algorithms_agree(seed in any::<u64>(), k in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sym_pencil(&mut rng, k, 2);
        prop_assert_eq!(char_poly_coeffs(&a).c, char_poly_coeffs_cofactor(&a).c);
    }

    #[test]
    fn kernel_faces_contain_their_hull(seed in any::<u64>(), c in proptest::collection::vec(-4i64..=4, 2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, x) = random_pencil(&mut rng);
        let face = face_of_point(&a, &x).unwrap();
        prop_assert_eq!(face.status, FaceStatus::Proper);
        let ell = exposing_functional(&face, &a).unwrap();
        prop_assert!(ell.eval(&x).unwrap().is_zero());
        // Points of the affine hull that lie in S belong to the face.
        let mut y = face.hull.point.clone();
        for (dir, ci) in face.hull.directions.iter().zip(&c) {
            for (yi, di) in y.iter_mut().zip(dir) {
                *yi += rat(*ci, 8) * di;
            }
        }
        if spectrahedron_member(&a, &y).unwrap() {
            prop_assert!(face.kernel_contained(&a, &y).unwrap());
            prop_assert!(ell.eval(&y).unwrap().is_zero());
        }
    }

    #[test]
    fn exposing_functional_is_exact(seed in any::<u64>(), y in point(2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, x) = random_pencil(&mut rng);
        let face = face_of_point(&a, &x).unwrap();
        let ell = exposing_functional(&face, &a).unwrap();
        if spectrahedron_member(&a, &y).unwrap() {
            let v = ell.eval(&y).unwrap();
            prop_assert!(!v.is_negative());
            if v.is_zero() {
                prop_assert!(face.kernel_contained(&a, &y).unwrap());
            }
        }
    }
}

fn random_sym(rng: &mut ChaCha8Rng, k: usize, range: i64) -> QMatrix {
    use rand::Rng;
    let mut m = QMatrix::zero(k);
    for i in 0..k {
        for j in i..k {
            let v = rat(rng.random_range(-range..=range), rng.random_range(1..=3));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

fn random_sym_pencil(rng: &mut ChaCha8Rng, k: usize, n: usize) -> LinMatPoly {
    LinMatPoly::new((0..=n).map(|_| random_sym(rng, k, 4)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Exact PSD test against a float eigenvalue oracle; near-singular
    /// matrices (inside the tolerance band) are left to the exact answer.
    #[test]
    fn psd_test_matches_eigenvalues(seed in any::<u64>(), k in 2usize..5, shift in 0i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_sym(&mut rng, k, 3);
        // B B^T - shift/4 I is PSD often enough to exercise both answers.
        let m = b.mul(&b).add(&QMatrix::identity(k).scale(&rat(-shift, 4)));
        let f = m.to_f64();
        let trace: f64 = (0..k).map(|i| f[(i, i)].abs()).sum();
        let lmin = SymmetricEigen::new(f).eigenvalues.min();
        let band = 1e-9 * trace.max(1.0);
        let exact = is_psd_exact(&m).unwrap();
        if lmin > band {
            prop_assert!(exact);
        } else if lmin < -band {
            prop_assert!(!exact);
        }
    }
}

#[test]
fn renegar_chain_of_example1_is_iterated_derivative() {
    let p = example1::p();
    // Degree-normalised chain: p^(k+1) = (p^(k))^(1) up to the positive factor
    // deg(p^(k)) / deg(p); compare after scaling by the origin value.
    let mut prev = p.clone();
    for k in 1..=2 {
        let direct = spectra_core::rigidconv::renegar_derivative(&p, k).unwrap();
        let step = spectra_core::rigidconv::renegar_derivative(&prev, 1).unwrap();
        let c0 = direct.constant_term();
        let s0 = step.constant_term();
        assert!(!c0.is_zero() && !s0.is_zero());
        assert_eq!(direct.scale(&(Rational::one() / c0)), step.scale(&(Rational::one() / s0)), "k = {k}");
        prev = direct;
    }
}

#[test]
fn tangent_normal_is_gradient_at_simple_boundary_points() {
    let p = example1::p();
    let grad = p.gradient();
    for x in spectra_core::reproduce::example1_boundary_points() {
        let t = exposing_tangent(&p, &x).unwrap();
        if t.multiplicity == 1 {
            let g: Vec<Rational> = grad.iter().map(|q| q.eval(&x).unwrap()).collect();
            assert_eq!(t.normal, g, "at {x:?}");
        }
    }
}

#[test]
fn example1_pencil_membership_on_a_grid_matches_float_eigenvalues() {
    let a = example1::pencil();
    for i in -8..=14 {
        for j in -5..=5 {
            let x = vec![rat(i, 4), rat(j, 2)];
            let m = eval_pencil(&a, &x).unwrap();
            let lmin = SymmetricEigen::new(m.to_f64()).eigenvalues.min();
            if lmin.abs() > 1e-9 {
                assert_eq!(spectrahedron_member(&a, &x).unwrap(), lmin > 0.0, "{:?}", x.iter().map(to_f64).collect::<Vec<_>>());
            }
        }
    }
}
