use koszul_hh_core::complexes::{Coefficients, Grading, HochschildComplex};
use koszul_hh_core::cup::multiply;
use koszul_hh_core::linalg::{kernel_basis, rank, rref, solve, Matrix, SparseVector};
use koszul_hh_core::presentation::{
    intersection_coalgebra, parse_presentation, Algebra, Presentation,
};
use koszul_hh_core::{Rational, RationalDual};
use num_traits::{One, Zero};
use proptest::prelude::*;

type Q = Rational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn fixture(name: &str) -> Presentation<Q> {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_presentation(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn matrix() -> impl Strategy<Value = Matrix<Q>> {
    (1usize..7, 1usize..7)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..4, c), r))
        .prop_map(|rows| {
            Matrix::from_dense(
                rows.into_iter()
                    .map(|r| r.into_iter().map(q).collect())
                    .collect(),
            )
        })
}

/// Random quadratic relations on `n` generators as presentation text.
fn quadratic_text() -> impl Strategy<Value = (usize, String)> {
    (2usize..4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-2i64..3, n * n), 1..4).prop_map(move |rels| {
            let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let mut text = format!("field Q\ngenerators: {}\nrelations:\n", names.join(" "));
            for coeffs in rels {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| format!("({c})*{}*{}", names[i / n], names[i % n]))
                    .collect();
                if !terms.is_empty() {
                    text.push_str(&format!("  {}\n", terms.join(" + ")));
                }
            }
            (n, text)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.ncols());
        for v in &k {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rref_is_idempotent_and_solves(m in matrix(), x in prop::collection::vec(-3i64..4, 6)) {
        let rows = rref(&m);
        let again = rref(&Matrix::from_rows(m.ncols(), rows.clone()));
        prop_assert_eq!(rows, again);
        let x = SparseVector::from_dense(x.into_iter().take(m.ncols()).map(q).chain(std::iter::repeat(Q::zero())).take(m.ncols()).collect());
        let b = m.mul_vec(&x);
        let y = solve(&m, &b).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn perp_of_perp_is_r((n, text) in quadratic_text()) {
        let p: Presentation<Q> = parse_presentation(&text).unwrap();
        let c = intersection_coalgebra(&p, 2);
        let quad: Vec<SparseVector<Q>> = p.relation_basis().into_iter().map(|r| r.quadratic).collect();
        let dim_r = rank(&Matrix::from_rows(n * n, quad.clone()));
        prop_assert_eq!(c.r_perp().len() + dim_r, n * n);
        // (R^perp)^perp = kernel of the pairing with R^perp, which must be R
        let pairing = Matrix::from_rows(n * n, c.r_perp().to_vec());
        let back = kernel_basis(&pairing);
        prop_assert_eq!(back.len(), dim_r);
        let mut joint = quad.clone();
        joint.extend(back);
        prop_assert_eq!(rank(&Matrix::from_rows(n * n, joint)), dim_r);
        // the dual algebra has dimension n in degree 1 and dim R in degree 2
        let t = RationalDual::for_presentation(&p, 2);
        prop_assert_eq!(t.dim(1), n);
        prop_assert_eq!(t.dim(2), dim_r);
        prop_assert!(t.verify_duality().pass);
    }
}

fn words(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, 0..6)
}

fn normal_form_props(
    name: &'static str,
) -> impl Fn(Vec<usize>, Vec<usize>, Vec<usize>) -> Result<(), TestCaseError> {
    let a = Algebra::new(fixture(name)).unwrap();
    move |u, v, w| {
        let (nu, nv, nw) = (
            a.normal_form_word(&u),
            a.normal_form_word(&v),
            a.normal_form_word(&w),
        );
        prop_assert_eq!(a.normal_form(&nu), nu.clone());
        let mut uv = u.clone();
        uv.extend(&v);
        prop_assert_eq!(a.normal_form_word(&uv), a.mul(&nu, &nv));
        prop_assert_eq!(a.mul(&a.mul(&nu, &nv), &nw), a.mul(&nu, &a.mul(&nv, &nw)));
        Ok(())
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn heisenberg_normal_form(u in words(3), v in words(3), w in words(3)) {
        normal_form_props("heisenberg.kp")(u, v, w)?;
    }

    #[test]
    fn weyl_normal_form(u in words(4), v in words(4), w in words(4)) {
        normal_form_props("weyl2.kp")(u, v, w)?;
    }

    #[test]
    fn clifford_normal_form(u in words(2), v in words(2), w in words(2)) {
        normal_form_props("clifford.kp")(u, v, w)?;
    }
}

/// Every stored structure check on every rational fixture.
#[test]
fn dual_structure_on_fixtures() {
    for name in [
        "heisenberg.kp",
        "weyl1.kp",
        "weyl2.kp",
        "clifford.kp",
        "skew.kp",
        "kxy.kp",
        "free-x.kp",
        "aq-2.kp",
        "aq-minus1.kp",
    ] {
        let p = fixture(name);
        let t = RationalDual::for_presentation(&p, 5);
        for c in [
            t.verify_curved(),
            t.verify_leibniz(),
            t.verify_associativity(),
            t.verify_duality(),
        ] {
            assert!(c.pass, "{name}: {c}");
        }
        for k in 0..=t.computed_degree() {
            assert_eq!(t.dim(k), t.coalgebra().dim(k), "{name} degree {k}");
        }
    }
}

#[test]
fn d_squared_vanishes_on_slices() {
    let heis = Algebra::new(fixture("heisenberg.kp")).unwrap();
    let ht = RationalDual::for_presentation(heis.presentation(), 5);
    for coeff in [Coefficients::Regular, Coefficients::Enveloping] {
        let cx = HochschildComplex::new(&heis, &ht, &coeff);
        for w in -3..=2 {
            cx.build_slice(Grading::Weight(w), 0, 3)
                .unwrap()
                .verify_d_squared()
                .unwrap();
        }
    }
    let weyl = Algebra::new(fixture("weyl1.kp")).unwrap();
    let wt = RationalDual::for_presentation(weyl.presentation(), 4);
    let cx = HochschildComplex::new(&weyl, &wt, &Coefficients::Regular);
    for d in 0..=4 {
        cx.build_slice(Grading::Filtration(d), 0, 1)
            .unwrap()
            .verify_d_squared()
            .unwrap();
    }
}

#[test]
fn cochain_product_leibniz_and_unit() {
    let a = Algebra::new(fixture("heisenberg.kp")).unwrap();
    let t = RationalDual::for_presentation(a.presentation(), 5);
    let coeff = Coefficients::Regular;
    let cx = HochschildComplex::new(&a, &t, &coeff);
    let slice = cx.build_slice(Grading::Weight(1), 0, 2).unwrap();
    let unit = {
        let mut u = koszul_hh_core::complexes::CochainElement::zero(0);
        u.add_term(
            (0, koszul_hh_core::complexes::ModuleMonomial::Word(vec![])),
            Q::one(),
        );
        u
    };
    for p in 0..=1 {
        for key in slice.basis(p).iter().take(12) {
            let mut u = koszul_hh_core::complexes::CochainElement::zero(p);
            u.add_term(key.clone(), Q::one());
            assert_eq!(multiply(&cx, &unit, &u).unwrap(), u);
            assert_eq!(multiply(&cx, &u, &unit).unwrap(), u);
            let x1 = {
                let mut v = koszul_hh_core::complexes::CochainElement::zero(1);
                v.add_term(
                    (0, koszul_hh_core::complexes::ModuleMonomial::Word(vec![1])),
                    q(2),
                );
                v
            };
            let lhs = cx.d(&multiply(&cx, &u, &x1).unwrap());
            let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
            let mut rhs = multiply(&cx, &cx.d(&u), &x1).unwrap();
            rhs.add_scaled(&sign, &multiply(&cx, &u, &cx.d(&x1)).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}
