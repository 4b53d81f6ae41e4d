#[path = "common/props.rs"]
mod props;

macro_rules! property {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = props::run(stringify!($name)) {
                    panic!("{e}");
                }
            }
        )*
    };
}

property!(
    ring_axioms,
    order_axioms,
    substitution_and_derivative,
    spolys_reduce_to_zero,
    normal_form_ignores_reducer_order,
    eliminate_intersect_quotient,
    dimension_order_independent,
    syzygies_annihilate,
    relations_vanish,
    membership_witnesses,
    module_intersection_in_span,
    minimal_relation_degree,
    actions_compose,
    invariants_closed,
    coboundary_round_trip,
    annihilator_closed_forms,
    roberts_round_trip,
    emitted_elements_invariant,
    powers_keep_hsop,
    kernel_is_frobenius_closed,
    scan_monotone,
    certificates_replay_and_reject_tampering,
    deterministic_output,
);
