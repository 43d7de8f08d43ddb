//! Strategies and invariant bodies shared by the property and acceptance targets.
#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use hopfcalc::fplinalg::MatrixFp;
use hopfcalc::hopf::compute;
use hopfcalc::presentation::{corpus, Presentation};
use hopfcalc::rewrite::{complete, Budget, RewriteSystem};
use hopfcalc::words::{Letter, Word};

pub type Outcome = Result<(), TestCaseError>;

pub const ARITY: usize = 3;

pub fn letter() -> impl Strategy<Value = Letter> {
    (0..ARITY, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

pub fn raw(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..max)
}

pub fn word(max: usize) -> impl Strategy<Value = Word> {
    raw(max).prop_map(Word::new)
}

/// Words on two generators, for the two-generator corpus groups.
pub fn word2(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..2usize, any::<bool>()), 0..max)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, i)| Letter::new(g, i))))
}

pub fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

/// `(p, cols, rows)` with entries in `-10..10`.
pub fn matrix() -> impl Strategy<Value = (u64, usize, Vec<Vec<i64>>)> {
    (prime(), 1usize..8, 1usize..8).prop_flat_map(|(p, r, c)| {
        let rows = prop::collection::vec(prop::collection::vec(-10i64..10, c), r);
        (Just(p), Just(c), rows)
    })
}

fn exps(w: &Word) -> Vec<i64> {
    w.exponent_vector(ARITY).unwrap()
}

pub fn abelian(n: u32, m: u32) -> Presentation {
    Presentation::parse(&format!("gens: a b\nrel: a^{n}\nrel: b^{m}\nrel: [a,b]")).unwrap()
}

pub fn sl2f3() -> &'static (Presentation, RewriteSystem) {
    static S: OnceLock<(Presentation, RewriteSystem)> = OnceLock::new();
    S.get_or_init(|| {
        let p = corpus("SL2_F3").unwrap();
        let r = complete(&p, &Budget::default());
        assert!(r.is_confluent());
        (p, r)
    })
}

/// A truncated, non-confluent system for an infinite group.
pub fn sl2z_partial() -> &'static RewriteSystem {
    static S: OnceLock<RewriteSystem> = OnceLock::new();
    S.get_or_init(|| {
        let b = Budget {
            max_rules: 200,
            ..Budget::default()
        };
        complete(&corpus("SL2_Z").unwrap(), &b)
    })
}

pub fn free_reduce_idempotent(v: Vec<Letter>) -> Outcome {
    let w = Word::new(v);
    prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inverse()));
    prop_assert_eq!(Word::new(w.letters().to_vec()), w);
    Ok(())
}

pub fn exponents_additive(u: Word, v: Word) -> Outcome {
    let s: Vec<i64> = exps(&u).iter().zip(exps(&v)).map(|(a, b)| a + b).collect();
    prop_assert_eq!(exps(&u.multiply(&v)), s);
    let neg: Vec<i64> = exps(&u).iter().map(|a| -a).collect();
    prop_assert_eq!(exps(&u.inverse()), neg);
    Ok(())
}

pub fn inverse_laws(u: Word, v: Word) -> Outcome {
    prop_assert!(u.multiply(&u.inverse()).is_identity());
    prop_assert_eq!(u.inverse().inverse(), u.clone());
    prop_assert_eq!(u.multiply(&v).inverse(), v.inverse().multiply(&u.inverse()));
    Ok(())
}

pub fn associative(u: Word, v: Word, w: Word) -> Outcome {
    prop_assert_eq!(u.multiply(&v).multiply(&w), u.multiply(&v.multiply(&w)));
    Ok(())
}

pub fn powers_add(u: Word, a: i64, b: i64) -> Outcome {
    prop_assert_eq!(u.pow(a).multiply(&u.pow(b)), u.pow(a + b));
    Ok(())
}

pub fn cyclic_reduce_factors(w: Word) -> Outcome {
    let (core, c) = w.cyclic_reduce();
    prop_assert!(core.is_cyclically_reduced());
    prop_assert_eq!(c.inverse().multiply(&core).multiply(&c), w);
    Ok(())
}

pub fn cyclic_key_invariant(w: Word, g: Word, k: usize) -> Outcome {
    let key = w.cyclic_key();
    prop_assert_eq!(w.conjugate(&g).cyclic_key(), key.clone());
    prop_assert_eq!(w.inverse().cyclic_key(), key.clone());
    let (core, _) = w.cyclic_reduce();
    prop_assert_eq!(core.rotate(k).cyclic_key(), key.clone());
    prop_assert_eq!(key.len(), core.len());
    Ok(())
}

pub fn rotation_keeps_content(w: Word, k: usize) -> Outcome {
    let (core, _) = w.cyclic_reduce();
    prop_assert_eq!(core.rotate(k).len(), core.len());
    prop_assert_eq!(exps(&core.rotate(k)), exps(&core));
    Ok(())
}

pub fn syllables_round_trip(w: Word) -> Outcome {
    prop_assert_eq!(Word::from_syllables(&w.syllables()), w);
    Ok(())
}

pub fn render_parse_round_trip(rels: Vec<Word>) -> Outcome {
    let p = Presentation::new(["a", "b", "c"], rels).unwrap();
    prop_assert_eq!(Presentation::parse(&p.render()).unwrap(), p);
    Ok(())
}

pub fn normal_form_idempotent(w: Word) -> Outcome {
    for rws in [&sl2f3().1, sl2z_partial()] {
        let n = rws.normal_form(&w).unwrap();
        prop_assert!(rws.is_irreducible(&n));
        prop_assert_eq!(rws.normal_form(&n).unwrap(), n);
    }
    Ok(())
}

pub fn normal_form_congruence(u: Word, v: Word) -> Outcome {
    let rws = &sl2f3().1;
    let nf = |w: &Word| rws.normal_form(w).unwrap();
    prop_assert_eq!(nf(&u.multiply(&v)), nf(&nf(&u).multiply(&nf(&v))));
    prop_assert!(nf(&u.multiply(&u.inverse())).is_identity());
    Ok(())
}

pub fn relators_trivial(g: Word, i: usize) -> Outcome {
    let (p, rws) = sl2f3();
    let r = &p.relators()[i % p.relators().len()];
    prop_assert!(rws.normal_form(&r.conjugate(&g)).unwrap().is_identity());
    Ok(())
}

pub fn abelian_relators_trivial(n: u32, m: u32, g: Word) -> Outcome {
    let p = abelian(n, m);
    let rws = complete(&p, &Budget::default());
    prop_assert!(rws.is_confluent());
    prop_assert_eq!(rws.group_order(100), Some((n * m) as usize));
    for r in p.relators() {
        prop_assert!(rws.normal_form(&r.conjugate(&g)).unwrap().is_identity());
    }
    Ok(())
}

pub fn rank_plus_kernel((p, c, rows): (u64, usize, Vec<Vec<i64>>)) -> Outcome {
    let m = MatrixFp::from_rows(p, c, &rows).unwrap();
    let k = m.left_kernel_basis();
    prop_assert_eq!(m.rank() + k.len(), m.rows());
    prop_assert_eq!(m.transpose().rank(), m.rank());
    for v in &k {
        prop_assert!(m.left_mul(v).iter().all(|&x| x == 0));
    }
    if !k.is_empty() {
        let signed: Vec<Vec<i64>> = k.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
        prop_assert_eq!(MatrixFp::from_rows(p, m.rows(), &signed).unwrap().rank(), k.len());
    }
    Ok(())
}

pub fn independent_rows_span((p, c, rows): (u64, usize, Vec<Vec<i64>>)) -> Outcome {
    let m = MatrixFp::from_rows(p, c, &rows).unwrap();
    let basis = m.select_independent_rows();
    prop_assert_eq!(basis.len(), m.rank());
    prop_assert_eq!(m.select_rows(&basis).rank(), m.rank());
    for i in 0..m.rows() {
        let coeffs = m.express_in_basis(&basis, m.row(i)).unwrap();
        let mut sum = vec![0u64; c];
        for (&b, &x) in basis.iter().zip(&coeffs) {
            for (s, &e) in sum.iter_mut().zip(m.row(b)) {
                *s = (*s + x * e) % p;
            }
        }
        prop_assert_eq!(sum.as_slice(), m.row(i));
    }
    Ok(())
}

pub fn pipeline_deterministic(n: u32, m: u32, p: u64) -> Outcome {
    let pres = abelian(n, m);
    let b = Budget::default();
    let names = pres.generator_names();
    let x = compute(&pres, p, &b).unwrap().to_json("g", names).to_string();
    let y = compute(&pres, p, &b).unwrap().to_json("g", names).to_string();
    prop_assert_eq!(x, y);
    Ok(())
}
