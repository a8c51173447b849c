"""Randomized invariant checks; seeds are fixed so failures reproduce."""

import invariants


def test_marking_conservation():
    assert invariants.run_marking_conservation(wanted=1000) >= 1000


def test_enabled_labels_match_brute_force():
    invariants.run_enabled_labels_vs_brute_force(rounds=300)


def test_event_graph_is_a_forward_dag_with_transitive_presets():
    invariants.run_graph_properties(rounds=50)


def test_context_canonical_form_is_deterministic():
    invariants.run_canonical_determinism(rounds=100)


def test_replay_is_independent_of_queue_tie_breaking(l1, ocpn1, flower_l1,
                                                     restricted):
    invariants.run_queue_order_independence(l1, (ocpn1, flower_l1, restricted))


def test_metric_bounds():
    invariants.run_metric_bounds(rounds=40)


def test_untriggered_state_budgets_do_not_change_reports(l1, ocpn1):
    invariants.run_monotone_truncation(l1, ocpn1)


def test_tight_state_budgets_only_shrink_enabled_sets(l1, ocpn1):
    invariants.run_truncation_shrinks_enabled(l1, ocpn1)


def test_grouping_matches_naive_oracle():
    invariants.run_grouping_agreement(rounds=30)
