use freecurve::analyze::{is_modular_point, sampled_lines_agreement};
use freecurve::coeff::{Field, FieldConfig, Scalar};
use freecurve::construct::{reduce_mod_p, DEFAULT_PRIMES};
use freecurve::graded::{global_tjurina, mdr};
use freecurve::local::{colength, default_cap};
use freecurve::parse::{parse_homog, parse_point, parse_poly};
use freecurve::poly::{resultant_binary, BinaryForm, HomogPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::prime(DEFAULT_PRIMES[1]).unwrap(),
        FieldConfig::gaussian().build().unwrap(),
        FieldConfig::extension(FieldConfig::Rationals, "t^2-t+1", "t").build().unwrap(),
        FieldConfig::extension(FieldConfig::PrimeField { p: 97 }, "t^3+t+1", "t").build().unwrap(),
    ]
}

/// `Σ (n_j / d_j) g^j` over the generator powers.
fn element(field: &Field, parts: &[(i64, i64)]) -> Scalar {
    let g = field.generator();
    let mut out = field.zero();
    let mut power = field.one();
    for &(n, d) in parts.iter().take(field.relative_degree()) {
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        let c = match field.base() {
            Some(b) => field.lift(b.from_rational(&q).unwrap()),
            None => field.from_rational(&q).unwrap(),
        };
        out = field.add(&out, &field.mul(&c, &power));
        if let Some(g) = &g {
            power = field.mul(&power, g);
        }
    }
    out
}

fn parts() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-50i64..50, 1i64..20), 3)
}

fn form(field: &Field, d: u32, coeffs: &[i64]) -> HomogPoly {
    let mut terms = vec![format!("x^{d}")];
    let mut k = 0;
    for i in 0..=d {
        for j in 0..=d - i {
            terms.push(format!("({})*x^{i}*y^{j}*z^{}", coeffs[k % coeffs.len()], d - i - j));
            k += 1;
        }
    }
    parse_homog(&terms.join("+"), field).unwrap()
}

fn binary(field: &Field, coeffs: &[i64]) -> BinaryForm {
    let mut c: Vec<Scalar> = coeffs.iter().map(|&n| field.from_i64(n)).collect();
    let last = c.len() - 1;
    if field.is_zero(&c[last]) {
        c[last] = field.one();
    }
    BinaryForm::new(field, last, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(which in 0usize..5, a in parts(), b in parts(), c in parts()) {
        let f = &fields()[which];
        let (a, b, c) = (element(f, &a), element(f, &b), element(f, &c));
        prop_assert_eq!(f.add(&a, &f.add(&b, &c)), f.add(&f.add(&a, &b), &c));
        prop_assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert!(f.is_zero(&f.sub(&a, &a)));
        prop_assert_eq!(f.mul(&a, &f.one()), a.clone());
        if !f.is_zero(&a) {
            let inv = f.inv(&a).unwrap();
            prop_assert!(f.is_one(&f.mul(&a, &inv)));
            prop_assert_eq!(f.div(&b, &a).unwrap(), f.mul(&b, &inv));
        }
    }

    #[test]
    fn euler_identity(which in 0usize..5, d in 1u32..7, coeffs in prop::collection::vec(-9i64..10, 1..12)) {
        let g = form(&fields()[which], d, &coeffs);
        prop_assert!(g.euler_identity_holds());
    }

    #[test]
    fn resultant_is_multiplicative(
        a in prop::collection::vec(-9i64..10, 2..5),
        b in prop::collection::vec(-9i64..10, 2..5),
        c in prop::collection::vec(-9i64..10, 2..5),
        which in 0usize..3,
    ) {
        let f = &fields()[which];
        let (a, b, c) = (binary(f, &a), binary(f, &b), binary(f, &c));
        let lhs = resultant_binary(&a.mul(&b), &c).unwrap();
        let rhs = f.mul(&resultant_binary(&a, &c).unwrap(), &resultant_binary(&b, &c).unwrap());
        prop_assert_eq!(lhs, rhs);
        // Res(a, c) = ± Res(c, a)
        let ac = resultant_binary(&a, &c).unwrap();
        let ca = resultant_binary(&c, &a).unwrap();
        prop_assert!(ac == ca || ac == f.neg(&ca));
    }

    /// Once the truncated colength stops growing it is the colength: a
    /// larger cap changes nothing, and adding an element of the ideal does
    /// not move it either.
    #[test]
    fn colength_stabilizes(a in 2u32..6, b in 2u32..7, c in -4i64..5, extra in 0u32..12) {
        let q = Field::rationals();
        let g = parse_poly(&format!("u^{a}+v^{b}+({c})*u^{a}*v"), &q, &["u", "v"]).unwrap();
        let jac = [g.derivative(0), g.derivative(1)];
        let mu = colength(&jac, None).unwrap();
        prop_assert_eq!(mu, colength(&jac, Some(default_cap(&jac) + extra)).unwrap());
        let more = [jac[0].clone(), jac[1].clone(), jac[0].mul(&jac[1])];
        prop_assert_eq!(mu, colength(&more, None).unwrap());
        prop_assert_eq!(mu, ((a - 1) * (b - 1)) as usize);
    }

    #[test]
    fn two_primes_agree_with_the_rationals(d in 3u32..6, coeffs in prop::collection::vec(-3i64..4, 3..10), lines in 0usize..3) {
        let q = Field::rationals();
        // singular members: the random form times a few lines through (0:0:1)
        let mut f = form(&q, d, &coeffs);
        for l in ["x", "y", "x+y"].iter().take(lines) {
            f = f.mul(&parse_homog(l, &q).unwrap());
        }
        prop_assume!(f.is_squarefree().unwrap());
        let want = (mdr(&f).unwrap(), global_tjurina(&f).unwrap());
        for p in DEFAULT_PRIMES {
            let g = reduce_mod_p(&f, p).unwrap().unwrap();
            prop_assert_eq!((mdr(&g).unwrap(), global_tjurina(&g).unwrap()), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampled_lines_agree_with_the_verdict(seed in any::<u64>(), which in 0usize..4) {
        let q = Field::rationals();
        let (text, p) = [
            ("x*y*(x*y*z+x^3+y^3)", "(0:0:1)"),
            ("x*y*(x*y*z+x^3+y^3)", "(1:0:0)"),
            ("(x-y)*(y-z)*(z-x)*(x^2*y^2+y^2*z^2+x^2*z^2-2*x*y*z*(x+y+z))", "(1:1:1)"),
            ("x*(x^2+z^2)*(x^4+(x*z+y^2)^2)", "(0:1:0)"),
        ][which];
        let f = parse_homog(text, &q).unwrap();
        let pt = parse_point(p, &q).unwrap();
        let rep = is_modular_point(&f, &pt).unwrap();
        let agree = sampled_lines_agreement(&f, &pt, &rep, 50, seed).unwrap();
        prop_assert!(agree.all_agree(), "{} at {}: {:?}", text, p, agree);
    }
}
