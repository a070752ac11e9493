use super::*;
use crate::covers::construction_sharp_almost_cover;
use crate::exact_arith::{frac, ints};
use crate::pointsets::{orbit_points, permutohedron};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00c0_51ab;

fn v(n: usize) -> SparsePoly {
    vandermonde_poly(n).unwrap()
}

/// `∏_{i<j} (x_j − x_i)` by repeated multiplication.
fn vandermonde_by_product(n: usize) -> SparsePoly {
    let mut forms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut normal = vec![int(0); n];
            normal[j] = int(1);
            normal[i] = int(-1);
            forms.push((normal, int(0)));
        }
    }
    product_of_linear_forms(n, &forms).unwrap()
}

/// Independent permanent: plain sum over all permutations.
fn permanent_by_definition(a: &[ExactScalar]) -> ExactScalar {
    let n = a.len();
    (0..n)
        .permutations(n)
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(i, &j)| {
                    let mut p = int(1);
                    for _ in 0..j {
                        p *= &a[i];
                    }
                    p
                })
                .product::<ExactScalar>()
        })
        .sum()
}

/// Random exponent vector of total degree `deg`.
fn random_monomial(rng: &mut ChaCha8Rng, n: usize, deg: usize) -> Vec<u16> {
    let mut e = vec![0u16; n];
    for _ in 0..deg {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// Random polynomial of degree exactly `C(n,2)` with coefficients in −9..9.
/// Half the terms are permutation monomials so the signed sum is often
/// nonzero.
fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> SparsePoly {
    let top = n * (n - 1) / 2;
    loop {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(2..8) {
            let e = if rng.gen_bool(0.5) {
                let mut perm: Vec<u16> = (0..n as u16).collect();
                for i in (1..n).rev() {
                    perm.swap(i, rng.gen_range(0..=i));
                }
                perm
            } else {
                let deg = rng.gen_range(0..=top);
                random_monomial(rng, n, deg)
            };
            terms.push((e, int(rng.gen_range(-9..=9))));
        }
        terms.push((random_monomial(rng, n, top), int(rng.gen_range(1..=9))));
        let f = SparsePoly::from_terms(n, terms).unwrap();
        if f.degree() == Some(top) {
            return f;
        }
    }
}

#[test]
fn vandermonde_examples() {
    assert_eq!(v(2), SparsePoly::from_terms(2, [(vec![0, 1], int(1)), (vec![1, 0], int(-1))]).unwrap());
    let v3 = v(3);
    assert_eq!(v3.len(), 6);
    assert_eq!(v3.coefficient(&[0, 1, 2]).unwrap(), int(1));
    assert_eq!(v3.coefficient(&[1, 1, 1]).unwrap(), int(0));
    assert_eq!(evaluate(&v3, &Point::from_ints(&[1, 2, 3])).unwrap(), int(2));
    assert!(matches!(vandermonde_poly(9), Err(Error::SizeLimit(_))));
    assert_eq!(v(1), SparsePoly::one(1));
}

#[test]
fn vandermonde_forms_agree() {
    for n in 1..=5 {
        let vn = v(n);
        assert_eq!(vn, vandermonde_by_product(n));
        assert_eq!(vn.len(), (1..=n).product::<usize>());
        assert!(vn.terms().all(|(_, c)| c == &int(1) || c == &int(-1)));
        assert_eq!(vn.degree(), Some(n * (n - 1) / 2));
        // determinant of the Vandermonde matrix at a point
        let a: Vec<ExactScalar> = (0..n as i64).map(|i| frac(3 * i * i - 2, i + 1)).collect();
        assert_eq!(vn.evaluate(&a).unwrap(), ExactMatrix::vandermonde(&a).determinant().unwrap());
        if n >= 2 {
            let mut b = a.clone();
            b[n - 1] = b[0].clone();
            assert!(vn.evaluate(&b).unwrap().is_zero());
        }
    }
}

#[test]
fn product_examples() {
    let f = product_of_linear_forms(1, &[(ints(&[1]), int(-1)), (ints(&[1]), int(-2))]).unwrap();
    assert_eq!(f, SparsePoly::from_terms(1, [(vec![2], int(1)), (vec![1], int(-3)), (vec![0], int(2))]).unwrap());
    assert_eq!(product_of_linear_forms(3, &[]).unwrap(), SparsePoly::one(3));
    let g = SparsePoly::linear(&ints(&[1, 1]), &int(-5)).pow(2).unwrap();
    assert_eq!(g.degree(), Some(2));
    assert_eq!(g.len(), 6);
    assert!(matches!(
        product_of_linear_forms(2, &[(ints(&[1]), int(0))]),
        Err(Error::ShapeMismatch(_))
    ));
}

#[test]
fn algebra_basics() {
    let f = random_poly(&mut ChaCha8Rng::seed_from_u64(SEED), 3);
    assert_eq!(multiply(&f, &SparsePoly::one(3)).unwrap(), f);
    assert!(multiply(&f, &SparsePoly::zero(3)).unwrap().is_zero());
    assert!(matches!(multiply(&f, &SparsePoly::one(2)), Err(Error::ShapeMismatch(_))));
    assert!(matches!(evaluate(&f, &Point::from_ints(&[1, 2])), Err(Error::ShapeMismatch(_))));
    assert!(matches!(coefficient(&f, &[1]), Err(Error::ShapeMismatch(_))));
    let x = SparsePoly::var(2, 0).unwrap();
    let y = SparsePoly::var(2, 1).unwrap();
    let s = x.add(&y.scale(&int(-1))).unwrap();
    assert_eq!(s.to_string(), "x1 - x2");
    assert_eq!(SparsePoly::zero(2).degree(), None);
    assert_eq!(v(3).to_string(), "-x1^2*x2 + x1^2*x3 + x1*x2^2 - x1*x3^2 - x2^2*x3 + x2*x3^2");
}

#[test]
fn text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 1..=4 {
        let f = random_poly(&mut rng, n.max(2)).scale(&frac(2, 7));
        let text = f.to_text();
        assert!(text.starts_with(&format!("# nvars={}\n", f.nvars())));
        assert_eq!(SparsePoly::from_text(&text).unwrap(), f);
    }
    let t = "# nvars=2\n3 0 0\n-1/2 1 1\n";
    let f = SparsePoly::from_text(t).unwrap();
    assert_eq!(f.to_text(), t);
    assert!(SparsePoly::from_text("# nvars=2\n1 0\n").is_err());
    assert!(SparsePoly::from_text("nvars 2").is_err());
}

#[test]
fn signed_sum_examples() {
    assert_eq!(signed_perm_sum(&v(3)).unwrap(), int(6));
    let cube = SparsePoly::from_terms(3, [(vec![0, 0, 3], int(1))]).unwrap();
    assert_eq!(signed_perm_sum(&cube).unwrap(), int(0));
    let scaled = v(3).scale_variables(&ints(&[1, 2, 3])).unwrap();
    assert_eq!(signed_perm_sum(&scaled).unwrap(), int(48));
    assert!(matches!(
        signed_perm_sum(&SparsePoly::from_terms(3, [(vec![1, 0, 0], int(1))]).unwrap()),
        Err(Error::DegreeMismatch { expected: 3, .. })
    ));
    assert!(matches!(signed_perm_sum(&SparsePoly::zero(3)), Err(Error::DegreeMismatch { .. })));
    for n in 2..=6 {
        assert_eq!(signed_perm_sum(&v(n)).unwrap(), int((1..=n as i64).product()));
    }
}

#[test]
fn involution_reverses_sign_by_parity() {
    for n in 1..=6 {
        let parity = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        for perm in (0..n).permutations(n) {
            let rev: Vec<usize> = perm.iter().map(|&p| n - 1 - p).collect();
            assert_eq!(permutation_sign(&rev), parity * permutation_sign(&perm));
        }
    }
}

#[test]
fn coefficient_identity_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 2..=5 {
        let vn = v(n);
        let top = vec![(n - 1) as u16; n];
        let parity = if (n * (n - 1) / 2) % 2 == 0 { int(1) } else { int(-1) };
        for _ in 0..25 {
            let f = random_poly(&mut rng, n);
            let lhs = vn.multiply(&f).unwrap().coefficient(&top).unwrap();
            assert_eq!(lhs, parity.clone() * signed_perm_sum(&f).unwrap());
        }
    }
}

#[test]
fn witness_examples() {
    let (p, val) = find_nonvanishing_witness(&v(3), &ints(&[1, 2, 3])).unwrap().unwrap();
    assert_eq!(p, Point::from_ints(&[1, 2, 3]));
    assert_eq!(val, int(2));
    let (p, val) = find_nonvanishing_witness(&v(4), &ints(&[0, 1, 2, 3])).unwrap().unwrap();
    assert!(!val.is_zero());
    assert!(permutohedron(4).unwrap().points().iter().any(|q| {
        q.coords().iter().zip(p.coords()).all(|(a, b)| a - int(1) == *b)
    }));
    // x3^3 has signed sum 0, so there is no contract; here it is nonzero anyway
    let cube = SparsePoly::from_terms(3, [(vec![0, 0, 3], int(1))]).unwrap();
    assert!(find_nonvanishing_witness(&cube, &ints(&[1, 2, 3])).unwrap().is_some());
    // vanishing on the orbit: (x1 + x2 + x3 − 6) * x1 * x2
    let f = product_of_linear_forms(3, &[(ints(&[1, 1, 1]), int(-6)), (ints(&[1, 0, 0]), int(0)), (ints(&[0, 1, 0]), int(0))]).unwrap();
    assert_eq!(find_nonvanishing_witness(&f, &ints(&[1, 2, 3])).unwrap(), None);
    assert!(matches!(find_nonvanishing_witness(&v(3), &ints(&[1, 1, 3])), Err(Error::DegenerateInput(_))));
    assert!(matches!(find_nonvanishing_witness(&v(3), &ints(&[1, 2])), Err(Error::ShapeMismatch(_))));
}

#[test]
fn witness_search_never_fails_on_random_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(2..=5);
        let f = random_poly(&mut rng, n);
        if signed_perm_sum(&f).unwrap().is_zero() {
            continue;
        }
        let mut alphas: Vec<ExactScalar> = Vec::new();
        while alphas.len() < n {
            let a = frac(rng.gen_range(-20..=20), rng.gen_range(1..=6));
            if !alphas.contains(&a) {
                alphas.push(a);
            }
        }
        let (p, val) = find_nonvanishing_witness(&f, &alphas).unwrap().expect("witness");
        assert_eq!(f.evaluate(p.coords()).unwrap(), val);
        assert!(orbit_points(&alphas).unwrap().contains(&p));
        checked += 1;
    }
}

#[test]
fn per_vandermonde_examples() {
    assert_eq!(per_vandermonde(&ints(&[1, 2, 3])).unwrap(), int(48));
    assert_eq!(permanent_by_definition(&ints(&[1, 2, 3])), int(48));
    assert_eq!(per_vandermonde(&ints(&[1, -1])).unwrap(), int(0));
    assert_eq!(per_vandermonde(&ints(&[0, 1])).unwrap(), int(1));
    assert!(matches!(per_vandermonde(&ints(&[1; 13])), Err(Error::SizeLimit(_))));
}

#[test]
fn numbering_examples() {
    let b = distinct_products_numbering(&ints(&[1, 2, 3]), &ints(&[1, 2, 3])).unwrap().unwrap();
    assert_eq!(b, ints(&[1, 2, 3]));
    assert_eq!(distinct_products_numbering(&ints(&[0, 0]), &ints(&[1, 2])).unwrap(), None);
    // the permanent vanishes here, yet numberings exist
    let b = distinct_products_numbering(&ints(&[1, -1]), &ints(&[1, 2])).unwrap().unwrap();
    assert_ne!(&b[0] * int(1), &b[1] * int(-1));
    assert!(matches!(distinct_products_numbering(&ints(&[1, 2]), &ints(&[1])), Err(Error::ShapeMismatch(_))));
}

#[test]
fn numbering_exists_whenever_the_permanent_is_nonzero() {
    let mut cases = 0;
    for a in itertools::repeat_n(-3i64..=3, 3).multi_cartesian_product() {
        let a = ints(&a);
        if per_vandermonde(&a).unwrap().is_zero() {
            continue;
        }
        for b in (1i64..=5).combinations(3) {
            let b = ints(&b);
            let got = distinct_products_numbering(&a, &b).unwrap().expect("numbering");
            let products: Vec<ExactScalar> = a.iter().zip(&got).map(|(x, y)| x * y).collect();
            assert!(products.iter().all_unique());
            cases += 1;
        }
    }
    assert!(cases > 0);
}

#[test]
fn vanishing_pattern_examples() {
    let cube3 = grid(&[ints(&[1, 2, 3]), ints(&[1, 2, 3]), ints(&[1, 2, 3])]).unwrap();
    let nz = vanishing_pattern(&v(3), &cube3).unwrap();
    let perms: Vec<Point> = nz.iter().map(|&i| cube3.points()[i].clone()).collect();
    let p3 = permutohedron(3).unwrap();
    assert_eq!(perms.len(), 6);
    assert!(perms.iter().all(|q| p3.contains(q)));

    let forms: Vec<_> = construction_sharp_almost_cover(4).iter().map(hyperplane_form).collect();
    let f = v(4).multiply(&product_of_linear_forms(4, &forms).unwrap()).unwrap();
    let g4 = grid(&vec![ints(&[1, 2, 3, 4]); 4]).unwrap();
    let nz = vanishing_pattern(&f, &g4).unwrap();
    assert_eq!(nz.len(), 1);
    assert_eq!(g4.points()[nz[0]], Point::from_ints(&[1, 2, 3, 4]));

    assert_eq!(vanishing_pattern(&SparsePoly::one(3), &p3).unwrap().len(), 6);
    assert!(matches!(vanishing_pattern(&SparsePoly::one(2), &p3), Err(Error::ShapeMismatch(_))));
}

#[test]
fn alon_furedi_examples() {
    let forms: Vec<_> = construction_sharp_almost_cover(3).iter().map(hyperplane_form).collect();
    let f = v(3).multiply(&product_of_linear_forms(3, &forms).unwrap()).unwrap();
    let factors = vec![ints(&[1, 2, 3]); 3];
    let r = alon_furedi_check(&f, &factors).unwrap();
    assert!(r.applicable);
    assert_eq!(r.nonvanishing, vec![Point::from_ints(&[1, 2, 3])]);
    assert_eq!((r.degree, r.bound, r.margin), (Some(6), 6, Some(0)));

    let r = alon_furedi_check(&v(3), &factors).unwrap();
    assert!(!r.applicable);
    assert_eq!(r.margin, None);

    let mixed = vec![ints(&[0, 1]), ints(&[0, 2, 5]), ints(&[-1, 1, 3, 4])];
    let f = axis_product(&mixed).unwrap();
    let r = alon_furedi_check(&f, &mixed).unwrap();
    assert!(r.applicable);
    assert_eq!(r.nonvanishing, vec![Point::from_ints(&[1, 5, 4])]);
    assert_eq!(r.degree, Some(1 + 2 + 3));
    assert_eq!(r.margin, Some(0));
    assert!(matches!(alon_furedi_check(&f, &mixed[..2]), Err(Error::ShapeMismatch(_))));
}

#[test]
fn surfaces_missing_one_permutohedron_vertex_have_high_degree() {
    // the n = 3 sharp almost cover as one surface, times V
    let forms: Vec<_> = construction_sharp_almost_cover(3).iter().map(hyperplane_form).collect();
    let surface = product_of_linear_forms(3, &forms).unwrap();
    let p3 = permutohedron(3).unwrap();
    assert_eq!(vanishing_pattern(&surface, &p3).unwrap(), vec![0]);
    let r = alon_furedi_check(&v(3).multiply(&surface).unwrap(), &vec![ints(&[1, 2, 3]); 3]).unwrap();
    assert!(r.applicable);
    assert!(surface.degree().unwrap() >= 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn signed_sum_of_scaled_vandermonde_is_the_permanent(
        a in prop::collection::vec((-6i64..=6, 1i64..=4), 1..=5)
    ) {
        let a: Vec<ExactScalar> = a.into_iter().map(|(p, q)| frac(p, q)).collect();
        let f = v(a.len()).scale_variables(&a).unwrap();
        let per = per_vandermonde(&a).unwrap();
        prop_assert_eq!(&per, &permanent_by_definition(&a));
        match signed_perm_sum(&f) {
            Ok(s) => prop_assert_eq!(s, per),
            // a zero coefficient can drop the degree below C(n,2)
            Err(Error::DegreeMismatch { .. }) => prop_assert!(per.is_zero() || a.iter().any(Zero::is_zero)),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn evaluation_respects_products(x in prop::collection::vec(-5i64..=5, 3), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 3);
        let g = random_poly(&mut rng, 3);
        let x = ints(&x);
        let fg = f.multiply(&g).unwrap();
        prop_assert_eq!(fg.evaluate(&x).unwrap(), f.evaluate(&x).unwrap() * g.evaluate(&x).unwrap());
    }
}
