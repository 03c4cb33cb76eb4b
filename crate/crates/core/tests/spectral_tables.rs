#![allow(clippy::needless_range_loop)]

use mubh_core::hadamard::build_mubh;
use mubh_core::matrix::{int, rat, RatMatrix, Rational};
use mubh_core::mubh_scheme::{build_five_class, build_three_class, gramian, gramian_relaxed};
use mubh_core::scheme::Scheme;
use mubh_core::spectral::{
    class3_q_sign_variant, closed_form_krein, closed_form_pq, find_q_polynomial_ordering, idempotent_matrix,
    idempotents_from_q, krein_bound_check, krein_params, q_structure, Family, SpectralError,
};

fn five(n: usize, m: usize) -> Scheme {
    let hs = build_mubh(n, m).unwrap();
    let bundle = if m >= 2 { gramian(&hs, n) } else { gramian_relaxed(&hs, n) };
    build_five_class(&bundle.unwrap()).unwrap().scheme
}

fn three(n: usize, m: usize) -> Scheme {
    build_three_class(&gramian(&build_mubh(n, m).unwrap(), n).unwrap()).unwrap()
}

fn rows(v: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_int_rows(&v.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn class_five_tables_at_2_3() {
    // Entries typed in from the tables at n = 2, m = 3.
    let p = rows(&[
        &[1, 3, 12, 12, 18, 18],
        &[1, -1, 0, 0, 6, -6],
        &[1, 3, -4, 12, -6, -6],
        &[1, 3, -4, -4, 2, 2],
        &[1, -1, 0, 0, -2, 2],
        &[1, 3, 12, -4, -6, -6],
    ]);
    let q = rows(&[
        &[1, 12, 3, 9, 36, 3],
        &[1, -4, 3, 9, -12, 3],
        &[1, 0, -1, -3, 0, 3],
        &[1, 0, 3, -3, 0, -1],
        &[1, 4, -1, 1, -4, -1],
        &[1, -4, -1, 1, 4, -1],
    ]);
    let cf = closed_form_pq(2, 3, Family::Class5).unwrap();
    assert_eq!(cf.p.as_ref(), Some(&p));
    assert_eq!(cf.q, q);
    let eig = idempotents_from_q(&five(2, 3), &q).unwrap();
    assert_eq!(eig.p, p);
    let b5 = rows(&[
        &[0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 3, 2, 0, 0],
        &[0, 3, 0, 0, 2, 0],
        &[3, 0, 0, 0, 0, 2],
    ]);
    let krein = krein_params(&eig);
    assert_eq!(krein.krein_matrix(5), b5);
    assert_eq!(closed_form_krein(2, 3, Family::Class5).unwrap(), Some((5, b5)));
}

#[test]
fn class_five_certified_on_the_grid() {
    for (n, m) in [(1, 1), (2, 1), (2, 2), (2, 3), (4, 7)] {
        let s = five(n, m);
        let cf = closed_form_pq(n, m, Family::Class5).unwrap();
        let eig = idempotents_from_q(&s, &cf.q).unwrap();
        assert_eq!(Some(eig.p.clone()), cf.p);
        let krein = krein_params(&eig);
        assert!(krein.is_admissible(), "({n},{m})");
        assert_eq!(krein.min_entry(), Rational::from_integer(0.into()));
        let (idx, display) = closed_form_krein(n, m, Family::Class5).unwrap().unwrap();
        assert_eq!(krein.krein_matrix(idx), display);
        assert_eq!(krein.get(1, 2, 1), &krein_bound_check(n, m).value, "({n},{m})");
    }
}

#[test]
fn krein_bound_values() {
    assert_eq!(krein_bound_check(2, 3).value, int(0));
    assert!(krein_bound_check(2, 3).pass);
    assert_eq!(krein_bound_check(2, 2).value, rat(1, 3));
    let over = krein_bound_check(2, 4);
    assert_eq!(over.value, rat(-1, 5));
    assert!(!over.pass);
    for n in 1..8 {
        for m in 1..4 * n {
            assert_eq!(krein_bound_check(n, m).pass, m < 2 * n);
        }
    }
}

#[test]
fn class_three_tables() {
    for (n, m) in [(2, 2), (2, 3), (4, 7)] {
        let s = three(n, m);
        let cf = closed_form_pq(n, m, Family::Class3).unwrap();
        let eig = idempotents_from_q(&s, &cf.q).unwrap();
        assert_eq!(Some(eig.p.clone()), cf.p);
        let krein = krein_params(&eig);
        let (idx, display) = closed_form_krein(n, m, Family::Class3).unwrap().unwrap();
        assert_eq!(idx, 1);
        assert_eq!(krein.krein_matrix(1), display);
        let natural = [0, 1, 2, 3];
        let flags = q_structure(&krein, &natural);
        assert!(flags.q_polynomial && flags.q_antipodal && !flags.q_bipartite, "({n},{m}): {flags:?}");
        assert_eq!(find_q_polynomial_ordering(&krein), Some(natural.to_vec()));
    }
    // B_1* at (2, 3) from the parametric display, entry by entry.
    let krein =
        krein_params(&idempotents_from_q(&three(2, 3), &closed_form_pq(2, 3, Family::Class3).unwrap().q).unwrap());
    let b1 = krein.krein_matrix(1);
    let want = [
        [int(0), int(1), int(0), int(0)],
        [int(15), rat(2 * (8 - 3 - 1), 4), int(4), int(0)],
        [int(0), rat(16 * 3, 4), rat(14 * 3 - 2, 4), int(15)],
        [int(0), int(0), int(1), int(0)],
    ];
    for (r, row) in want.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            assert_eq!(b1.get(r, c), v, "B1*[{r}][{c}]");
        }
    }
}

#[test]
fn sign_variant_of_class_three_q_is_rejected() {
    for (n, m) in [(2, 2), (2, 3)] {
        let q = class3_q_sign_variant(n, m).unwrap();
        assert!(idempotents_from_q(&three(n, m), &q).is_err());
    }
}

#[test]
fn dense_idempotents_on_class_three() {
    let s = three(2, 3);
    let eig = idempotents_from_q(&s, &closed_form_pq(2, 3, Family::Class3).unwrap().q).unwrap();
    let rels = s.rels();
    let v = rels.size();
    let es: Vec<RatMatrix> = (0..4).map(|j| idempotent_matrix(rels, &eig, j)).collect();
    let zero = RatMatrix::zeros(v, v).unwrap();
    let mut total = zero.clone();
    for j in 0..4 {
        for k in 0..4 {
            let prod = es[j].mul(&es[k]).unwrap();
            assert_eq!(prod, if j == k { es[j].clone() } else { zero.clone() }, "E{j}E{k}");
        }
        assert_eq!(es[j].trace().unwrap(), eig.multiplicities[j]);
        total = total.add(&es[j]).unwrap();
    }
    assert_eq!(total, RatMatrix::identity(v).unwrap());
    for l in 0..4 {
        let a = RatMatrix::from_fn(v, v, |x, y| int((rels.get(x, y) == l) as i64)).unwrap();
        for j in 0..4 {
            assert_eq!(a.mul(&es[j]).unwrap(), es[j].scalar_mul(eig.p.get(j, l)), "A{l}E{j}");
        }
    }
}

#[test]
fn bad_q_tables_are_caught() {
    let s = five(2, 3);
    let q = closed_form_pq(2, 3, Family::Class5).unwrap().q;
    let swapped = q.permute_columns(&[1, 0, 2, 3, 4, 5]).unwrap();
    assert!(matches!(idempotents_from_q(&s, &swapped), Err(SpectralError::E0Mismatch(_))));
    let relabelled = q.permute_rows(&[0, 2, 1, 3, 4, 5]).unwrap();
    assert!(idempotents_from_q(&s, &relabelled).is_err());
    // A column permutation fixing E_0 only relabels the idempotents.
    let cols = q.permute_columns(&[0, 2, 1, 3, 5, 4]).unwrap();
    assert!(idempotents_from_q(&s, &cols).is_ok());
}
