mod common;

macro_rules! suite {
    ($name:ident) => {
        #[test]
        fn $name() {
            if let Err(e) = common::$name() {
                panic!("{e}");
            }
        }
    };
}

suite!(k_chain_rule_and_inverse);
suite!(heights_agree_with_schreier_check);
suite!(partner_is_an_involution_on_vertices);
suite!(gauss_bonnet_and_euler);
suite!(redecompose_in_own_frame_is_identity);
suite!(canonical_form_matches_isomorphism);
suite!(identity_is_a_member);
suite!(prefilter_never_rejects_members);
suite!(word_walk_agrees_with_membership);
