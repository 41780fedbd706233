use gcd_height::auxdiv::{dimension_criterion, find_section, search_certificate, verify_certificate, Certificate};
use gcd_height::harness::{evaluate_bound, sample_points, SampleSpec};
use gcd_height::heights::{gcd_height, ln_big, normalize_point, weil_height, ProjPoint};
use gcd_height::ideals::{hilbert_profile, membership, Ideal};
use gcd_height::polyalgebra::{graded_monomials, parse_poly, Poly, Rat};
use gcd_height::rr_lab::{check_lemma_h0, check_rr_inequality, colength_linear, rr_growth_in_m};
use num_bigint::BigUint;
use proptest::prelude::*;

fn coordinate_ideal(nvars: usize, c: usize) -> Ideal {
    let gens: Vec<String> = (0..c).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    Ideal::parse(nvars, &refs).unwrap()
}

fn int_poly(nvars: usize, degree: u32, coeffs: &[i64]) -> Poly {
    let monos = graded_monomials(nvars, degree);
    Poly::from_terms(
        nvars,
        monos.into_iter().zip(coeffs.iter().cycle()).map(|(m, &c)| (m, Rat::from_integer(c.into()))).collect::<Vec<_>>(),
    )
}

fn point_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-200i64..=200, 3).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn generators_strategy() -> impl Strategy<Value = Vec<Poly>> {
    prop::collection::vec((1u32..=2, prop::collection::vec(-3i64..=3, 6)), 1..=3).prop_filter_map(
        "nonzero generators",
        |specs| {
            let gens: Vec<Poly> = specs.iter().map(|(d, c)| int_poly(3, *d, c)).collect();
            gens.iter().all(|g| !g.is_zero()).then_some(gens)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn heights_ignore_the_representative(raw in point_strategy(), num in 1i64..40, den in 1i64..40, neg: bool, gens in generators_strategy()) {
        let lambda = Rat::new((if neg { -num } else { num }).into(), den.into());
        let a = normalize_point(&raw.iter().map(|&x| Rat::from_integer(x.into())).collect::<Vec<_>>()).unwrap();
        let b = normalize_point(&raw.iter().map(|&x| Rat::from_integer(x.into()) * &lambda).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(&a, &b);
        let again = normalize_point(&a.coords().iter().map(|c| Rat::from_integer(c.clone())).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(&again, &a);
        let ideal = Ideal::new(3, gens).unwrap();
        prop_assert_eq!(weil_height(&a), weil_height(&b));
        prop_assert_eq!(gcd_height(&a, &ideal).unwrap(), gcd_height(&b, &ideal).unwrap());
    }

    #[test]
    fn gcd_parts_are_symmetric_and_bounded(raw in point_strategy(), gens in generators_strategy(), lam in 2i64..60, which in 0usize..3) {
        let x = ProjPoint::from_integers(&raw).unwrap();
        let ideal = Ideal::new(3, gens.clone()).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let h = gcd_height(&x, &ideal).unwrap();
        let hr = gcd_height(&x, &Ideal::new(3, rev).unwrap()).unwrap();
        prop_assert_eq!(h.vanishing, hr.vanishing);
        if !h.vanishing {
            prop_assert_eq!(h.gcd_finite, hr.gcd_finite);
            prop_assert_eq!(h.gcd_arch, hr.gcd_arch);
            prop_assert!(h.gcd_finite >= 0.0 && h.gcd_arch >= 0.0);
            prop_assert!((h.gcd_total - h.gcd_finite - h.gcd_arch).abs() < 1e-12);
            prop_assert!(h.gcd_finite <= ln_big(&h.common_divisor) + 1e-12);

            let mut scaled = gens.clone();
            let i = which % scaled.len();
            scaled[i] = scaled[i].scale(&Rat::from_integer(lam.into()));
            let hs = gcd_height(&x, &Ideal::new(3, scaled).unwrap()).unwrap();
            prop_assert!((hs.gcd_finite - h.gcd_finite).abs() <= (lam as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn single_squarefree_generator_gives_log_of_value(raw in point_strategy()) {
        let ideal = Ideal::parse(3, &["x0 + 2*x1 - x2"]).unwrap();
        let x = ProjPoint::from_integers(&raw).unwrap();
        let h = gcd_height(&x, &ideal).unwrap();
        if !h.vanishing {
            let v = h.common_divisor.clone();
            let squarefree = (2u32..=30).all(|p| &v % BigUint::from(p * p) != BigUint::from(0u32));
            if squarefree {
                prop_assert!((h.gcd_finite - ln_big(&v)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn lemma_holds_on_the_grid() {
    for n in 1..=6 {
        for e in 1..=20 {
            assert!(check_lemma_h0(n, e), "n={n} e={e}");
        }
    }
}

#[test]
fn colength_is_close_to_its_leading_term() {
    for c in 1..=4u32 {
        let cf: f64 = (1..=c).map(f64::from).product();
        for r in 1..=50u32 {
            let l = colength_linear(c, r) as f64;
            let main = f64::from(r).powi(c as i32) / cf;
            assert!((l - main).abs() <= f64::from(c) * f64::from(r).powi(c as i32 - 1) + 1e-9);
        }
    }
}

#[test]
fn rr_inequality_never_flags_linear_subvarieties() {
    for nvars in 3..=5usize {
        let n = nvars - 1;
        for c in 1..=n {
            let ideal = coordinate_ideal(nvars, c);
            let profile = hilbert_profile(&ideal).unwrap();
            assert_eq!((profile.c, profile.deg_y), (c, 1));
            for m in [6u32, 9] {
                let fit = check_rr_inequality(&ideal, &profile, m, 5).unwrap();
                assert!(!fit.violation, "n={n} c={c} m={m}: {fit:?}");
                assert_eq!(fit.leading, fit.predicted);
            }
        }
    }
}

#[test]
fn rr_growth_in_m_matches_the_degree_of_powers() {
    // the colength of the r-th power along a codimension-c linear space
    for (nvars, c) in [(3usize, 2usize), (4, 2), (4, 3)] {
        let ideal = coordinate_ideal(nvars, c);
        for r in 1..=3u32 {
            let fit = rr_growth_in_m(&ideal, r, 12).unwrap();
            assert_eq!(fit.exponent as usize, nvars - 1 - c);
            assert_eq!(fit.leading, fit.predicted, "nvars={nvars} c={c} r={r}");
        }
    }
}

fn criterion_suite() -> Vec<Ideal> {
    vec![
        coordinate_ideal(3, 2),
        coordinate_ideal(4, 2),
        coordinate_ideal(4, 3),
        Ideal::parse(3, &["x0 - x1", "x1 - x2"]).unwrap(),
        Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap(),
        Ideal::parse(3, &["x0*x2 - x1^2"]).unwrap(),
        Ideal::parse(3, &["x0^2 + x1^2 - x2^2", "x0 - 2*x1"]).unwrap(),
    ]
}

#[test]
fn criterion_is_monotone_and_matches_sections() {
    for ideal in criterion_suite() {
        for r in 1..=3 {
            let mut seen_true = false;
            for m in 0..=7 {
                let holds = dimension_criterion(&ideal, m, r);
                assert!(!seen_true || holds, "{:?} r={r} m={m}", ideal.generator_strings());
                seen_true |= holds;
                let section = find_section(&ideal, m, r);
                assert_eq!(section.is_some(), holds);
                if let Some(f) = section {
                    assert!(f.is_homogeneous_of_degree(m));
                    assert!(membership(&f, &ideal.power(r)));
                }
            }
        }
    }
}

#[test]
fn linear_subspaces_need_degree_r() {
    for (nvars, c) in [(3usize, 2usize), (4, 2), (4, 3), (5, 3)] {
        let ideal = coordinate_ideal(nvars, c);
        for r in 1..=5u32 {
            let first = (1..=12).find(|&m| dimension_criterion(&ideal, m, r));
            assert_eq!(first, Some(r), "nvars={nvars} c={c}");
        }
    }
}

#[test]
fn counting_condition_implies_criterion_on_linear_suite() {
    for nvars in 3..=5usize {
        let n = nvars - 1;
        for c in 2..=n.min(3) {
            let d = n - c;
            let ideal = coordinate_ideal(nvars, c);
            let nf: f64 = (1..=n).map(|k| k as f64).product();
            let cf: f64 = (1..=c).map(|k| k as f64).product();
            for r in 1..=5u32 {
                for m in 1..=10u32 {
                    let mf = f64::from(m);
                    let lhs = mf.powi(n as i32) / nf;
                    let rhs = f64::from(r).powi(c as i32) * mf.powi(d as i32) / cf;
                    if lhs > rhs {
                        assert!(dimension_criterion(&ideal, m, r), "n={n} c={c} m={m} r={r}");
                    }
                }
            }
        }
    }
}

#[test]
fn searched_certificates_verify() {
    for ideal in criterion_suite() {
        let out = search_certificate(&ideal, 0.25, 3, 7).unwrap();
        let cert = &out.certificate;
        assert!(verify_certificate(cert).is_valid(), "{:?}", ideal.generator_strings());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(&back, cert);
        assert!(verify_certificate(&back).is_valid());
    }
}

#[test]
fn reports_are_deterministic_and_nonnegative() {
    let y = Ideal::parse(3, &["x0*x2 - x1^2", "x0 - x2"]).unwrap();
    let out = search_certificate(&y, 0.5, 2, 6).unwrap();
    let spec = SampleSpec::random(2, 500, 3000, 11);
    let points = sample_points(&spec).unwrap();
    let a = evaluate_bound(&out.certificate, &points).unwrap();
    let b = evaluate_bound(&out.certificate, &sample_points(&spec).unwrap()).unwrap();
    assert_eq!(a, b);
    for row in a.iter().filter(|r| !r.excluded) {
        assert!(row.weil >= 0.0 && row.gcd_total.unwrap() >= 0.0);
    }
    let mut shuffled = points.clone();
    shuffled.reverse();
    assert_eq!(evaluate_bound(&out.certificate, &shuffled).unwrap(), a);
}

#[test]
fn excess_grows_with_the_height_bound() {
    let y = Ideal::parse(3, &["x0 - x1", "x1 - x2"]).unwrap();
    let cert = Certificate::new(y, 1, 1, parse_poly("x0 - x1", 3).unwrap(), Some(1.0));
    let mut last = f64::NEG_INFINITY;
    for h in [2u64, 5, 10, 20] {
        let rows = evaluate_bound(&cert, &sample_points(&SampleSpec::exhaustive(2, h)).unwrap()).unwrap();
        let max = rows.iter().filter_map(|r| r.excess).fold(f64::NEG_INFINITY, f64::max);
        assert!(max >= last);
        last = max;
    }
}
