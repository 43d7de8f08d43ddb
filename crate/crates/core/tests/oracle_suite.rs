//! Pipeline against the bar-complex oracle on small finite groups.

use hopfcalc::hopf::{compute, h1_dimension, BoundKind};
use hopfcalc::oracle::{bar_h1, bar_h2, bar_homology, check, MultTable, Verdict};
use hopfcalc::presentation::{corpus, Presentation};
use hopfcalc::rewrite::Budget;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).unwrap()
}

fn table(p: &Presentation) -> MultTable {
    MultTable::from_presentation(p, &Budget::default(), 24).unwrap()
}

fn suite() -> Vec<(String, Presentation)> {
    let mut out: Vec<(String, Presentation)> = (2..=12)
        .map(|n| (format!("Z/{n}"), pres(&format!("gens: a\nrel: a^{n}"))))
        .collect();
    out.push(("Klein".into(), pres("gens: a b\nrel: a^2\nrel: b^2\nrel: [a,b]")));
    out.push(("Q8".into(), pres("gens: i j\nrel: i^4\nrel: i^2*j^-2\nrel: j^-1*i*j*i")));
    out.push(("S3".into(), corpus("SL2_F2").unwrap()));
    out.push(("SL2(F3)".into(), corpus("SL2_F3").unwrap()));
    out
}

#[test]
fn pipeline_agrees_with_oracle() {
    let b = Budget::default();
    for (name, p) in suite() {
        let t = table(&p);
        for prime in PRIMES {
            let (oh1, oh2) = bar_homology(&t, prime).unwrap();
            let r = compute(&p, prime, &b).unwrap();
            assert_eq!(r.h1_dim, oh1, "{name} p={prime} h1");
            match r.h2_kind {
                BoundKind::Exact => assert_eq!(r.h2_value, oh2, "{name} p={prime} h2"),
                BoundKind::UpperBound => assert!(r.h2_value >= oh2, "{name} p={prime} h2 bound"),
            }
        }
    }
}

#[test]
fn anchors() {
    for p in PRIMES {
        let t = table(&pres(&format!("gens: a\nrel: a^{p}")));
        assert_eq!(bar_h2(&t, p).unwrap(), 1);
    }
    let klein = table(&pres("gens: a b\nrel: a^2\nrel: b^2\nrel: [a,b]"));
    assert_eq!(bar_h2(&klein, 2).unwrap(), 3);
    let q8 = table(&pres("gens: i j\nrel: i^4\nrel: i^2*j^-2\nrel: j^-1*i*j*i"));
    assert_eq!(q8.order(), 8);
    assert_eq!(bar_h2(&q8, 2).unwrap(), 2);
    let s3 = table(&corpus("SL2_F2").unwrap());
    assert_eq!(bar_h2(&s3, 3).unwrap(), 0);
    assert_eq!(bar_h2(&s3, 2).unwrap(), 1);
}

#[test]
fn coprime_torsion_vanishes() {
    let t = table(&pres("gens: a\nrel: a^3"));
    assert_eq!(bar_h1(&t, 2).unwrap(), 0);
    assert_eq!(bar_h2(&t, 2).unwrap(), 0);
}

#[test]
fn oracle_h1_matches_exponent_rank() {
    for (name, p) in suite() {
        let t = table(&p);
        for prime in PRIMES {
            assert_eq!(
                bar_h1(&t, prime).unwrap(),
                h1_dimension(&p, prime).unwrap(),
                "{name} p={prime}"
            );
        }
    }
}

#[test]
fn bar_h2_is_presentation_invariant() {
    let a = table(&pres("gens: a b\nrel: a^2\nrel: b^3\nrel: (a*b)^2"));
    let b = table(&pres("gens: x y\nrel: x^2\nrel: y^2\nrel: (x*y)^3"));
    assert_eq!(a.order(), 6);
    assert_eq!(b.order(), 6);
    for p in PRIMES {
        assert_eq!(bar_homology(&a, p).unwrap(), bar_homology(&b, p).unwrap());
    }
}

#[test]
fn check_passes_on_finite_corpus() {
    let b = Budget::default();
    for name in ["SL2_F2", "SL2_F3"] {
        for p in PRIMES {
            let row = check(&corpus(name).unwrap(), p, &b).unwrap();
            assert_eq!(row.verdict, Verdict::Pass, "{name} p={p}");
        }
    }
}
