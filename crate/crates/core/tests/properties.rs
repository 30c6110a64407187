use liebraid::analysis::{per_degree_norms, quotient_norm, shriek_norm};
use liebraid::coeff::{q, Q};
use liebraid::freealg::{Alphabet, Letter, Series, Word};
use liebraid::freelie::{is_grouplike, is_primitive, LieElement};
use liebraid::groupcal::{bch_series, ordered_exp, GroupElement, PathSegment, PiecewisePath};
use liebraid::kohno::KohnoAlgebra;
use liebraid::poisson::{build_hamiltonians, poisson_bracket, radius_squared, PolyFunction, Structure};
use liebraid::represent::MatrixRep;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coeff() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, d)| q(p, d))
}

fn free_series(m: usize, n: usize, with_constant: bool) -> impl Strategy<Value = Series> {
    let word = prop::collection::vec(1..=m, 0..=n);
    prop::collection::vec((word, coeff()), 0..6).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(w, _)| with_constant || !w.is_empty())
            .map(|(w, c)| (Word::free(&w), c));
        Series::from_terms(Alphabet::Free { size: m }, n, terms).unwrap()
    })
}

fn kohno_series(n: usize, trunc: usize, with_constant: bool) -> impl Strategy<Value = Series> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    let letter = prop::sample::select(pairs);
    let word = prop::collection::vec(letter, 0..=trunc);
    prop::collection::vec((word, coeff()), 0..5).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(w, _)| with_constant || !w.is_empty())
            .map(|(w, c)| (Word::pairs(&w), c));
        Series::from_terms(Alphabet::Kohno { n }, trunc, terms).unwrap()
    })
}

fn lie(alphabet: Alphabet, max_degree: usize) -> impl Strategy<Value = LieElement> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        LieElement::random(&mut rng, alphabet, max_degree, 0.6)
    })
}

fn poly(structure: Structure, max_deg: u16) -> impl Strategy<Value = PolyFunction> {
    let nv = structure.num_vars();
    prop::collection::vec((prop::collection::vec(0u16..=max_deg, nv), coeff()), 0..4).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u16>() <= max_deg);
        PolyFunction::from_terms(structure, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn associativity(a in free_series(2, 4, true), b in free_series(2, 4, true), c in free_series(2, 4, true)) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn antipode_reverses_products(a in free_series(2, 4, true), b in free_series(2, 4, true)) {
        prop_assert_eq!(a.mul(&b).unwrap().antipode(), b.antipode().mul(&a.antipode()).unwrap());
    }

    #[test]
    fn coproduct_is_multiplicative(a in free_series(2, 3, true), b in free_series(2, 3, true)) {
        let lhs = a.mul(&b).unwrap().shuffle_coproduct();
        let rhs = a.shuffle_coproduct().mul(&b.shuffle_coproduct()).unwrap();
        prop_assert!(lhs.differences(&rhs).is_empty());
    }

    #[test]
    fn ell1_submultiplicative(a in free_series(2, 4, true), b in free_series(2, 4, true)) {
        let (na, nb, nab) = (per_degree_norms(&a), per_degree_norms(&b), per_degree_norms(&a.mul(&b).unwrap()));
        for r in 0..=4 {
            let bound: Q = (0..=r).map(|p| &na[p] * &nb[r - p]).sum();
            prop_assert!(nab[r] <= bound);
        }
    }

    #[test]
    fn grading_rescale_endpoints(a in free_series(3, 3, true)) {
        prop_assert_eq!(a.grading_rescale(&Q::one()), a.clone());
        let c = a.constant_term();
        prop_assert_eq!(a.grading_rescale(&Q::zero()), Series::constant(a.alphabet(), 3, c));
    }

    #[test]
    fn lie_elements_are_primitive_and_exponentiate(x in lie(Alphabet::Free { size: 3 }, 4)) {
        let s = x.expand(4).unwrap();
        prop_assert!(is_primitive(&s));
        let g = s.exp().unwrap();
        prop_assert!(is_grouplike(&g));
        let w = Word::free(&[1, 2, 3]);
        let bumped = g.add(&Series::monomial(g.alphabet(), 4, w, q(1, 1000)).unwrap()).unwrap();
        prop_assert!(!is_grouplike(&bumped));
    }

    #[test]
    fn exp_log_bijection(x in free_series(2, 4, false), g in free_series(2, 4, false)) {
        prop_assert_eq!(x.exp().unwrap().log().unwrap(), x.clone());
        let g = g.add(&Series::one(g.alphabet(), 4)).unwrap();
        prop_assert_eq!(g.log().unwrap().exp().unwrap(), g);
    }

    #[test]
    fn bch_matches_exponentials(x in lie(Alphabet::Free { size: 2 }, 3), y in lie(Alphabet::Free { size: 2 }, 3), z in lie(Alphabet::Free { size: 2 }, 3)) {
        let (x, y, z) = (x.expand(4).unwrap(), y.expand(4).unwrap(), z.expand(4).unwrap());
        let xy = bch_series(&x, &y).unwrap();
        prop_assert_eq!(xy.exp().unwrap(), x.exp().unwrap().mul(&y.exp().unwrap()).unwrap());
        prop_assert!(is_primitive(&xy));
        prop_assert_eq!(bch_series(&xy, &z).unwrap(), bch_series(&x, &bch_series(&y, &z).unwrap()).unwrap());
    }

    #[test]
    fn ordered_exp_concat_and_reverse(a in lie(Alphabet::Free { size: 2 }, 3), b in lie(Alphabet::Free { size: 2 }, 3), c in lie(Alphabet::Free { size: 2 }, 3)) {
        let (a, b, c) = (a.expand(3).unwrap(), b.expand(3).unwrap(), c.expand(3).unwrap());
        let alphabet = a.alphabet();
        let p1 = PiecewisePath::new(alphabet, vec![PathSegment::new(q(1, 2), vec![a.clone(), b.clone()]).unwrap()]).unwrap();
        let p2 = PiecewisePath::new(alphabet, vec![PathSegment::new(q(2, 1), vec![c.clone()]).unwrap()]).unwrap();
        let whole = ordered_exp(&p1.concat(&p2).unwrap(), 3).unwrap();
        let parts = ordered_exp(&p1, 3).unwrap().mul(&ordered_exp(&p2, 3).unwrap()).unwrap();
        prop_assert_eq!(whole.series(), parts.series());
        prop_assert!(is_grouplike(whole.series()));
        let back = ordered_exp(&p1.reversed_negated(), 3).unwrap();
        let round = ordered_exp(&p1, 3).unwrap().mul(&back).unwrap();
        prop_assert_eq!(round.series(), &Series::one(alphabet, 3));
    }

    #[test]
    fn normal_form_idempotent_linear_and_strategy_free(a in kohno_series(4, 4, true), b in kohno_series(4, 4, true)) {
        use liebraid::kohno::RewriteStrategy::*;
        let alg = KohnoAlgebra::new(4).unwrap();
        let na = alg.normal_form(&a).unwrap();
        prop_assert_eq!(alg.normal_form(&na).unwrap(), na.clone());
        let sum = alg.normal_form(&a.add(&b).unwrap()).unwrap();
        prop_assert_eq!(sum, na.add(&alg.normal_form(&b).unwrap()).unwrap());
        prop_assert_eq!(alg.normal_form_with(&a, LeftmostDisorder).unwrap(), na.clone());
        prop_assert_eq!(alg.normal_form_with(&a, RightmostDisorder).unwrap(), na);
    }

    #[test]
    fn projection_is_homomorphism_and_contracts(a in kohno_series(4, 3, true), b in kohno_series(4, 3, true), alpha in 1usize..=2) {
        let alg = KohnoAlgebra::new(4).unwrap();
        let low = KohnoAlgebra::new(4 - alpha).unwrap();
        let lhs = alg.project_forget(&alg.kohno_mul(&a, &b).unwrap(), alpha).unwrap();
        let rhs = low.kohno_mul(&alg.project_forget(&a, alpha).unwrap(), &alg.project_forget(&b, alpha).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let z = alg.normal_form(&a).unwrap();
        let (nz, np) = (per_degree_norms(&z), per_degree_norms(&alg.project_forget(&z, alpha).unwrap()));
        for (x, y) in np.iter().zip(&nz) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn factorize_round_trips(x in lie(Alphabet::Kohno { n: 4 }, 3), y in lie(Alphabet::Kohno { n: 4 }, 2)) {
        let alg = KohnoAlgebra::new(4).unwrap();
        let g = GroupElement::exp_of(&x, 4).unwrap().mul(&GroupElement::exp_of(&y, 4).unwrap()).unwrap();
        let factors = alg.factorize(g.series()).unwrap();
        prop_assert_eq!(alg.product(&factors).unwrap(), alg.normal_form(g.series()).unwrap());
        let low = KohnoAlgebra::new(3).unwrap();
        let tail = alg.product(&factors[1..]).unwrap();
        let lower = low.factorize(&alg.project_forget(g.series(), 1).unwrap()).unwrap();
        prop_assert_eq!(low.factorize(&alg.project_forget(&tail, 1).unwrap()).unwrap(), lower);
    }

    #[test]
    fn quotient_norm_below_ell1(z in kohno_series(3, 3, false)) {
        let part = z.homogeneous_part(3);
        if !part.is_zero() {
            let qn = quotient_norm(&part).unwrap();
            let v = qn.value.unwrap().to_f64();
            let ell1 = liebraid::coeff::to_f64(&per_degree_norms(&part)[3]);
            prop_assert!(v <= ell1 + 1e-9 && v >= -1e-9);
            let alg = KohnoAlgebra::new(3).unwrap();
            let v2 = quotient_norm(&alg.normal_form(&part).unwrap()).unwrap().value.unwrap().to_f64();
            prop_assert!((v - v2).abs() < 1e-9);
        }
    }

    #[test]
    fn shriek_submultiplicative(z in free_series(2, 4, true), u in free_series(2, 4, true)) {
        let (a, b) = (q(1, 2), q(2, 3));
        let lhs = shriek_norm(&z.mul(&u).unwrap(), &(&a + &b)).unwrap();
        prop_assert!(lhs <= shriek_norm(&z, &a).unwrap() * shriek_norm(&u, &b).unwrap());
    }

    #[test]
    fn basis_change_bounds(z in free_series(2, 4, false)) {
        // ω1 ↦ ω1 + ω2, ω2 ↦ ω2: ‖A‖ = 2 and ‖A^{-1}‖ = 2 in the ℓ1 operator norm
        let alphabet = z.alphabet();
        let mut image = Series::zero(alphabet, 4);
        for (w, c) in z.terms() {
            let mut t = Series::constant(alphabet, 4, c.clone());
            for l in w.letters() {
                let g = match *l {
                    Letter::Free(1) => Series::from_terms(alphabet, 4, [(Word::free(&[1]), Q::one()), (Word::free(&[2]), Q::one())]).unwrap(),
                    other => Series::generator(alphabet, 4, other).unwrap(),
                };
                t = t.mul(&g).unwrap();
            }
            image = image.add(&t).unwrap();
        }
        let (before, after) = (per_degree_norms(&z), per_degree_norms(&image));
        for p in 0..=4 {
            let f = Q::from_integer(2.into()).pow(p as i32);
            prop_assert!(after[p] <= &before[p] * &f);
            prop_assert!(&after[p] * &f >= before[p]);
        }
    }

    #[test]
    fn evaluate_is_homomorphism(a in kohno_series(3, 3, true), b in kohno_series(3, 3, true)) {
        let rep = MatrixRep::sl2_spins(&["1/2", "1", "1/2"]).unwrap();
        let alg = KohnoAlgebra::new(3).unwrap();
        let (a, b) = (a.with_truncation(6), b.with_truncation(6));
        let ab = alg.kohno_mul(&a, &b).unwrap();
        prop_assert_eq!(rep.evaluate(&ab).unwrap(), rep.evaluate(&a).unwrap() * rep.evaluate(&b).unwrap());
        let total = rep.evaluate(&alg.total_generator(6).unwrap()).unwrap();
        let m = rep.evaluate(&a).unwrap();
        prop_assert_eq!(&total * &m, &m * &total);
    }

    #[test]
    fn poisson_axioms(f in poly(Structure::So3 { n: 2 }, 2), g in poly(Structure::So3 { n: 2 }, 2), h in poly(Structure::So3 { n: 2 }, 2)) {
        let fg = poisson_bracket(&f, &g).unwrap();
        prop_assert_eq!(fg.clone(), poisson_bracket(&g, &f).unwrap().neg());
        let leibniz = poisson_bracket(&f, &g.mul(&h).unwrap()).unwrap();
        let expanded = fg.mul(&h).unwrap().add(&g.mul(&poisson_bracket(&f, &h).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(leibniz, expanded);
        let jac = poisson_bracket(&f, &poisson_bracket(&g, &h).unwrap()).unwrap()
            .add(&poisson_bracket(&g, &poisson_bracket(&h, &f).unwrap()).unwrap()).unwrap()
            .add(&poisson_bracket(&h, &fg).unwrap()).unwrap();
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn gl_jacobi(f in poly(Structure::Gl { m: 2 }, 2), g in poly(Structure::Gl { m: 2 }, 2), h in poly(Structure::Gl { m: 2 }, 2)) {
        let b = |x: &PolyFunction, y: &PolyFunction| poisson_bracket(x, y).unwrap();
        let jac = b(&f, &b(&g, &h)).add(&b(&g, &b(&h, &f))).unwrap().add(&b(&h, &b(&f, &g))).unwrap();
        prop_assert!(jac.is_zero());
    }
}

#[test]
fn radii_are_casimirs() {
    for n in 2..=4 {
        let s = Structure::So3 { n };
        let hs = build_hamiltonians(s).unwrap();
        for j in 1..=n {
            let r = radius_squared(n, j).unwrap();
            for h in hs.values() {
                assert!(poisson_bracket(&r, h).unwrap().is_zero());
            }
        }
    }
}
