//! Library results against independent computations written here: plain
//! Gaussian elimination mod p for mdr and τ, root products for resultants,
//! and parametrizations for intersection numbers.

use std::collections::BTreeMap;

use freecurve::classify::{classify_curve, trichotomy_check, Trichotomy, Verdict};
use freecurve::coeff::{CoeffError, Field, FieldConfig};
use freecurve::graded::{global_tjurina, mdr};
use freecurve::local::{check_milnor_union, intersection_multiplicity, milnor_number, tangent_cone, tjurina_local};
use freecurve::parse::{parse_homog, parse_poly, parse_univariate};
use freecurve::poly::{resultant_binary, BinaryForm, HomogPoly};
use num_traits::{Signed, ToPrimitive};

const P: u64 = 1_000_003;

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    a %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % P;
        }
        a = a * a % P;
        e >>= 1;
    }
    r
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], P - 2);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c] * inv % P;
                for j in c..cols {
                    rows[i][j] = (rows[i][j] + P * P - f * rows[rank][j]) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

type Dense = BTreeMap<[u32; 3], u64>;

/// Integer-coefficient form reduced mod `P`.
fn reduce(f: &HomogPoly) -> Dense {
    let field = f.field();
    f.poly()
        .terms()
        .iter()
        .map(|(e, c)| {
            let q = field.as_rational(c).expect("rational coefficient");
            let n = q.numer().abs().to_u64().unwrap() % P;
            let n = if q.is_negative() { (P - n) % P } else { n };
            let d = q.denom().to_u64().unwrap() % P;
            (*e, n * pow_mod(d, P - 2) % P)
        })
        .collect()
}

fn monomials(k: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for b in (0..=k - a).rev() {
            out.push([a, b, k - a - b]);
        }
    }
    out
}

fn partials(f: &Dense) -> [Dense; 3] {
    std::array::from_fn(|i| {
        let mut g = Dense::new();
        for (e, c) in f {
            if e[i] > 0 {
                let mut e2 = *e;
                e2[i] -= 1;
                g.insert(e2, c * e[i] as u64 % P);
            }
        }
        g
    })
}

/// Rank of `(a, b, c) ↦ a f_x + b f_y + c f_z` on forms of degree `k`.
fn jacobian_rank(grad: &[Dense; 3], k: u32, deg: u32) -> usize {
    let target: BTreeMap<[u32; 3], usize> = monomials(k + deg - 1).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in grad {
        for m in monomials(k) {
            let mut row = vec![0u64; target.len()];
            for (e, c) in g {
                row[target[&[e[0] + m[0], e[1] + m[1], e[2] + m[2]]]] = *c;
            }
            rows.push(row);
        }
    }
    rank_mod_p(rows)
}

/// First degree with a nonzero syzygy among the partials, searched below
/// `d − 1` where no Koszul syzygy exists yet.
fn mdr_oracle(f: &HomogPoly) -> Option<u32> {
    let d = f.degree();
    let grad = partials(&reduce(f));
    (0..d - 1).find(|&k| jacobian_rank(&grad, k, d) < 3 * monomials(k).len())
}

/// `dim (S/J)_k` at `k = 3(d − 2) + 1`, where the Hilbert function of the
/// Milnor algebra has reached `τ`.
fn tau_oracle(f: &HomogPoly) -> usize {
    let d = f.degree();
    let k = 3 * (d - 2) + 1;
    let grad = partials(&reduce(f));
    monomials(k).len() - jacobian_rank(&grad, k + 1 - d, d)
}

fn q() -> Field {
    Field::rationals()
}

#[test]
fn mdr_and_tau_by_elimination() {
    let curves = [
        ("x*y*(x*y*z+x^3+y^3)", 2, 12),
        ("x*y*z", 1, 3),
        ("(x-y)*(y-z)*(z-x)*(x^2*y^2+y^2*z^2+x^2*z^2-2*x*y*z*(x+y+z))", 2, 28),
        ("(x^3+y^3+z^3)*(x^3+y^3)*(y^3+z^3)", 4, 47),
        ("x*y*(x+y)*(x-y)", 0, 9),
        ("x*y*(x^2*z+y^3+x^3)", 1, 13),
        ("(x^2*y^2+y^2*z^2+x^2*z^2)*(x^2+y^2)*(y^2+z^2)", 3, 37),
        ("x*(x^4+(x*z+y^2)^2)", 1, 13),
        ("y^2*z-x^3", 1, 2),
    ];
    for (text, r, tau) in curves {
        let f = parse_homog(text, &q()).unwrap();
        assert_eq!(mdr_oracle(&f), Some(r), "{text}");
        assert_eq!(tau_oracle(&f), tau, "{text}");
        assert_eq!(mdr(&f).unwrap(), r, "{text}");
        assert_eq!(global_tjurina(&f).unwrap(), tau, "{text}");
    }
}

#[test]
fn generic_curves_have_large_mdr() {
    // a smooth curve of degree d has only Koszul syzygies, so mdr = d − 1
    let f = parse_homog("x^5+y^5+z^5+x*y^3*z-2*x^2*z^3", &q()).unwrap();
    assert_eq!(mdr_oracle(&f), None);
    assert_eq!(mdr(&f).unwrap(), 4);
    assert_eq!(tau_oracle(&f), 0);
}

fn binary(coeffs: &[i64]) -> BinaryForm {
    let f = q();
    BinaryForm::new(&f, coeffs.len() - 1, coeffs.iter().map(|&c| f.from_i64(c)).collect())
}

#[test]
fn resultant_of_linear_forms_is_the_sylvester_determinant() {
    // a1 s + a0 t and b1 s + b0 t: det [[a1, a0], [b1, b0]]
    for (a0, a1, b0, b1) in [(1, 2, 3, 4), (-5, 7, 2, 0), (0, 1, 1, 0), (6, 3, 4, 2)] {
        let r = resultant_binary(&binary(&[a0, a1]), &binary(&[b0, b1])).unwrap();
        assert_eq!(r, q().from_i64(a1 * b0 - a0 * b1));
    }
}

#[test]
fn resultant_is_a_product_over_roots() {
    // f = Π (s − a_i t) gives Res(f, g) = Π g(a_i, 1)
    let roots = [2i64, -3, 5];
    let f = q();
    let mut prod = binary(&[1]);
    for a in roots {
        prod = prod.mul(&binary(&[-a, 1]));
    }
    let g = binary(&[7, -1, 0, 2]);
    let expected = roots.iter().fold(f.one(), |acc, &a| f.mul(&acc, &g.eval(&f.from_i64(a), &f.one())));
    assert_eq!(resultant_binary(&prod, &g).unwrap(), expected);
}

#[test]
fn reducible_modulus_reports_a_zero_divisor() {
    let k = FieldConfig::extension(FieldConfig::Rationals, "t^3+1", "t").build().unwrap();
    let t = k.generator().unwrap();
    let t_plus_1 = k.add(&t, &k.one());
    match k.inv(&t_plus_1) {
        Err(CoeffError::ZeroDivisor { text, .. }) => assert!(text.contains('t'), "{text}"),
        other => panic!("expected a zero divisor, got {other:?}"),
    }
    // the other factor t^2 − t + 1 is not invertible either
    let other = k.add(&k.sub(&k.mul(&t, &t), &t), &k.one());
    assert!(matches!(k.inv(&other), Err(CoeffError::ZeroDivisor { .. })));
    assert!(k.inv(&t).is_ok());
}

fn germ(text: &str) -> freecurve::poly::AffineLocalPoly {
    parse_poly(text, &q(), &["u", "v"]).unwrap()
}

/// Order of vanishing of `g(u, p(u))` at `u = 0`, the intersection number
/// of `g` with the smooth branch `v = p(u)`.
fn contact_with_graph(g: &str, p: &str) -> usize {
    let f = q();
    let gp = germ(g);
    let pu = parse_univariate(p, &f, "u").unwrap();
    let mut total: BTreeMap<u32, num_rational::BigRational> = BTreeMap::new();
    for (e, c) in gp.terms() {
        // u^e0 * p(u)^e1
        let mut series = vec![f.one()];
        for _ in 0..e[1] {
            let mut next = vec![f.zero(); series.len() + pu.len() - 1];
            for (i, a) in series.iter().enumerate() {
                for (j, b) in pu.iter().enumerate() {
                    next[i + j] = f.add(&next[i + j], &f.mul(a, b));
                }
            }
            series = next;
        }
        for (i, s) in series.iter().enumerate() {
            let k = i as u32 + e[0];
            let v = f.as_rational(&f.mul(s, c)).unwrap();
            *total.entry(k).or_default() += v;
        }
    }
    total.into_iter().find(|(_, v)| *v != num_rational::BigRational::default()).map(|(k, _)| k as usize).unwrap()
}

#[test]
fn milnor_numbers_of_unions() {
    // tacnode: two parabolas v = ±u^2 meeting with contact 2
    assert_eq!(contact_with_graph("v+u^2", "u^2"), 2);
    assert_eq!(intersection_multiplicity(&germ("v-u^2"), &germ("v+u^2")).unwrap(), 2);
    assert_eq!(milnor_number(&germ("v^2-u^4")).unwrap(), 3);
    assert!(check_milnor_union(&germ("v-u^2"), &germ("v+u^2")).unwrap());

    // D_{k+2} = u (v^2 − u^k): the line u = 0 meets the A_{k−1} germ with
    // contact 2, so μ = 0 + (k − 1) + 2·2 − 1 = k + 2
    for k in 2..=6u32 {
        let a = format!("v^2-u^{k}");
        assert_eq!(intersection_multiplicity(&germ("u"), &germ(&a)).unwrap(), 2);
        assert_eq!(milnor_number(&germ(&a)).unwrap(), (k - 1) as usize);
        assert_eq!(milnor_number(&germ(&format!("u*({a})"))).unwrap(), (k + 2) as usize);
        assert!(check_milnor_union(&germ("u"), &germ(&a)).unwrap());
    }

    // three smooth branches v = 0, v = u^2, v = 2 u^3
    let m = contact_with_graph("v*(v-u^2)", "2*u^3");
    assert_eq!(m, 3 + 2);
    assert_eq!(intersection_multiplicity(&germ("v*(v-u^2)"), &germ("v-2*u^3")).unwrap(), m);
}

#[test]
fn weighted_homogeneous_germs_have_tau_equal_mu() {
    // μ = (1/w1 − 1)(1/w2 − 1) for u^a + v^b
    for (a, b) in [(2, 3), (3, 4), (2, 7), (4, 5)] {
        let g = germ(&format!("u^{a}+v^{b}"));
        assert_eq!(milnor_number(&g).unwrap(), (a - 1) * (b - 1));
        assert_eq!(tjurina_local(&g).unwrap(), (a - 1) * (b - 1));
    }
    // u^4 + v^5 + u^2 v^3 is not quasi-homogeneous: τ = μ − 1
    let g = germ("u^4+v^5+u^2*v^3");
    assert_eq!(milnor_number(&g).unwrap(), 12);
    assert_eq!(tjurina_local(&g).unwrap(), 11);
}

#[test]
fn tangent_lines_of_a_product_of_lines() {
    // the lowest form is a product of the given lines; each root (α:β) of
    // α u + β v must kill exactly one factor
    let lines = [(1i64, 0i64), (0, 1), (1, -1), (2, 3)];
    let text = lines.iter().map(|(a, b)| format!("({a}*u+{b}*v)")).collect::<Vec<_>>().join("*");
    let g = germ(&format!("{text}+u^7+v^6"));
    let cone = tangent_cone(&g).unwrap();
    assert_eq!(cone.len(), lines.len());
    let f = q();
    for t in &cone {
        assert_eq!(t.exponent, 1);
        let hits = lines
            .iter()
            .filter(|(a, b)| f.is_zero(&f.sub(&f.mul(&t.line.alpha, &f.from_i64(*b)), &f.mul(&t.line.beta, &f.from_i64(*a)))))
            .count();
        assert_eq!(hits, 1);
    }
    let cusp = tangent_cone(&germ("(u+v)^2+u^3")).unwrap();
    assert_eq!(cusp.len(), 1);
    assert_eq!(cusp[0].exponent, 2);
}

#[test]
fn trichotomy_cases_from_computed_mdr() {
    // m lines through p plus a residual curve of degree e through p
    let cases = [
        // nodal cubic with its two tangents at the node
        ("x*y*(x*y*z+x^3+y^3)", 3, 2, Trichotomy::CaseC),
        // a conic with its tangent and another line at one point
        ("x*y*(y*z-x^2)", 2, 2, Trichotomy::CaseBFree),
        // three concurrent lines with a conic through their common point
        ("x*y*(x+y)*(y*z-x^2)", 2, 3, Trichotomy::CaseA),
    ];
    for (text, e, m, want) in cases {
        let f = parse_homog(text, &q()).unwrap();
        let r = mdr_oracle(&f).unwrap();
        let d = f.degree();
        let c = classify_curve(d, r, tau_oracle(&f) as u64, false).unwrap();
        let free = matches!(c.verdict, Verdict::Free { .. });
        assert_eq!(trichotomy_check(d, e, m, r, free).unwrap(), want, "{text}");
        // the defining conditions, evaluated directly
        let direct = if r == e {
            Trichotomy::CaseA
        } else if r + 1 == m && free {
            Trichotomy::CaseBFree
        } else {
            assert!(m <= r && r < e);
            Trichotomy::CaseC
        };
        assert_eq!(direct, want, "{text}");
    }
}

