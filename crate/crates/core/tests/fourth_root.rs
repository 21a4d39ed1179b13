//! The fourth-root generator of case 1 is `⁴√(ε_pq^b ε_2pq ε_qs ε_2qs)` with
//! `b` odd, and which odd `b` works depends on the triple: `b = 1` fails for
//! (5, 31, 19), `b = 3` fails for (5, 31, 59). The two candidates differ by
//! `√ε_pq`, which is not in `L⁺`.

use num_bigint::BigInt;
use num_rational::BigRational;

use mqunits::mqfield::MQElement;
use mqunits::survey::{evaluate, TripleField};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `ε_pq^b ε_2pq ε_qs ε_2qs` over the seeds `2, pq, 2pq, ps, 2ps, qs, 2qs`.
fn product(tf: &TripleField, b: i64) -> MQElement {
    evaluate(tf, &[q(0), q(b), q(1), q(0), q(0), q(1), q(1)]).unwrap()
}

/// `±√(ε_pq^b ε_2pq ε_qs ε_2qs)` up to sign, both signs checked.
fn has_fourth_root(tf: &TripleField, b: i64) -> bool {
    let x = product(tf, b);
    let r = x.try_sqrt().unwrap().expect("the square root lies in L+");
    [r.clone(), r.neg()].iter().any(|y| y.try_sqrt().unwrap().is_some())
}

#[test]
fn exponent_of_eps_pq_depends_on_triple() {
    let a = TripleField::new(5, 31, 19).unwrap();
    let b = TripleField::new(5, 31, 59).unwrap();
    assert!(!has_fourth_root(&a, 1));
    assert!(has_fourth_root(&a, 3));
    assert!(has_fourth_root(&b, 1));
    assert!(!has_fourth_root(&b, 3));
}

#[test]
fn stated_fourth_root_certified_absent() {
    let tf = TripleField::new(5, 31, 19).unwrap();
    let r = product(&tf, 1).try_sqrt().unwrap().unwrap();
    for y in [r.clone(), r.neg()] {
        let cert = y.non_square_certificate().unwrap().expect("non-square has a certificate");
        assert!(y.check_certificate(&cert).unwrap(), "{cert:?}");
    }
}

#[test]
fn eps_pq_is_not_a_square() {
    for s in [19, 59] {
        let tf = TripleField::new(5, 31, s).unwrap();
        let e = &tf.seed("pq").unwrap().element;
        let cert = e.non_square_certificate().unwrap().unwrap();
        assert!(e.check_certificate(&cert).unwrap());
    }
}
