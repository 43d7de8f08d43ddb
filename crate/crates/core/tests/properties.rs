//! Invariants of words, rewriting, linear algebra and the pipeline.

mod support;

use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduced_words_have_no_cancelling_pairs(v in raw(40)) {
        free_reduce_idempotent(v)?;
    }

    #[test]
    fn exponents_are_additive(u in word(30), v in word(30)) {
        exponents_additive(u, v)?;
    }

    #[test]
    fn inverses(u in word(30), v in word(30)) {
        inverse_laws(u, v)?;
    }

    #[test]
    fn multiplication_is_associative(u in word(20), v in word(20), w in word(20)) {
        associative(u, v, w)?;
    }

    #[test]
    fn powers(u in word(10), a in -4i64..5, b in -4i64..5) {
        powers_add(u, a, b)?;
    }

    #[test]
    fn cyclic_reduction(w in word(30)) {
        cyclic_reduce_factors(w)?;
    }

    #[test]
    fn cyclic_key_is_a_class_invariant(w in word(20), g in word(10), k in 0usize..20) {
        cyclic_key_invariant(w, g, k)?;
    }

    #[test]
    fn rotation(w in word(20), k in 0usize..20) {
        rotation_keeps_content(w, k)?;
    }

    #[test]
    fn syllables(w in word(30)) {
        syllables_round_trip(w)?;
    }

    #[test]
    fn render_then_parse(rels in prop::collection::vec(word(12), 0..5)) {
        render_parse_round_trip(rels)?;
    }

    #[test]
    fn normal_form_is_idempotent(w in word2(40)) {
        normal_form_idempotent(w)?;
    }

    #[test]
    fn normal_form_is_a_congruence(u in word2(30), v in word2(30)) {
        normal_form_congruence(u, v)?;
    }

    #[test]
    fn relators_are_trivial_after_completion(g in word2(20), i in 0usize..8) {
        relators_trivial(g, i)?;
    }

    #[test]
    fn abelian_relators_are_trivial(n in 2u32..7, m in 2u32..7, g in word2(20)) {
        abelian_relators_trivial(n, m, g)?;
    }

    #[test]
    fn rank_plus_kernel_is_rows(m in matrix()) {
        rank_plus_kernel(m)?;
    }

    #[test]
    fn independent_rows_span_the_row_space(m in matrix()) {
        independent_rows_span(m)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_is_deterministic(n in 2u32..7, m in 2u32..7, p in prime()) {
        pipeline_deterministic(n, m, p)?;
    }
}
