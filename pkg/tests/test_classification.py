import pytest

from gemcat.classification import (
    ClassPartition,
    ThetaParams,
    apply_theta,
    classify,
    format_report,
    label_classes,
    partition_report,
    theta_params_at,
    theta_schedule,
    theta_space_size,
)
from gemcat.code import canonical_form, code
from gemcat.errors import ConflictingLabels, DimensionMismatch
from gemcat.graph import standard_sphere
from gemcat.moves import insert_blob

from conftest import scramble


def test_theta_space_size():
    assert theta_space_size(2, 5) == 2 * 5 * 2**4 * 24
    assert theta_space_size(14, 5) == 14 * 5 * 14**4 * 24


def test_theta_params_enumeration_is_a_bijection():
    seen = set()
    space = theta_space_size(2, 5)
    for idx in range(space):
        p = theta_params_at(2, 5, idx)
        assert 1 <= p.i <= 2 and 0 <= p.c <= 4
        assert all(1 <= x <= 2 for x in p.x)
        assert sorted(p.tau) == [d for d in range(5) if d != p.c]
        seen.add(p)
    assert len(seen) == space


def test_theta_schedule_is_deterministic_and_spread():
    s0 = theta_schedule(14, 5, 100, 0)
    assert s0 == theta_schedule(14, 5, 100, 0)
    assert len(s0) == 100
    # spread across the space, not a contiguous prefix
    assert s0[-1] > theta_space_size(14, 5) // 2
    s1 = theta_schedule(14, 5, 100, 1)
    assert not set(s0) & set(s1)


def test_apply_theta_on_sphere_is_identity():
    g = standard_sphere(5)
    base = code(g)
    for idx in range(0, theta_space_size(2, 5), 7):
        reduced, handles = apply_theta(g, theta_params_at(2, 5, idx))
        assert code(reduced) == base
        assert handles == (0, 0)


def test_apply_theta_noop_when_targets_hit_blob(cp2):
    # x pointing at the blob's own vertices: every flip is skipped
    params = ThetaParams(i=1, c=0, x=(9, 9, 10, 10), tau=(1, 2, 3, 4))
    reduced, handles = apply_theta(canonical_form(cp2), params)
    assert code(reduced) == code(cp2)
    assert handles == (0, 0)


def test_apply_theta_outputs_are_rigid_dipole_free(cp2):
    from gemcat.moves import find_dipoles, find_rho_pairs

    g = canonical_form(cp2)
    for idx in range(0, 5000, 397):
        reduced, handles = apply_theta(g, theta_params_at(8, 5, idx))
        assert find_dipoles(reduced) == []
        assert find_rho_pairs(reduced, 3) == []
        assert find_rho_pairs(reduced, 4) == []
        assert reduced.is_contracted()
        assert reduced.is_bipartite()


def test_classify_merges_scrambled_sphere(rng):
    g = standard_sphere(5)
    h = scramble(g, rng, steps=3)
    part = classify([g, h], budget=50, passes=1)
    assert len(part.classes()) == 1


def test_classify_duplicate_inputs_share_a_class():
    g = standard_sphere(5)
    part = classify([g, g], budget=10, passes=1)
    assert len(part.classes()) == 1


def test_classify_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        classify([standard_sphere(5), standard_sphere(4)])


def test_label_classes_and_report():
    g = standard_sphere(5)
    h = scramble(g, __import__("random").Random(3), steps=2)
    part = classify([g, h], budget=50, passes=1)
    label_classes(part, {"S4": 0})
    recs = partition_report(part)
    assert len(recs) == 1
    assert recs[0]["label"] == "S4" and recs[0]["size"] == 2
    assert recs[0]["members"] == sorted([code(g), code(canonical_form(h))])
    # every merge is witnessed and replayable
    for w in recs[0]["merged_by"]:
        assert {"a", "b", "image", "handles", "theta_index"} <= set(w)
    assert format_report(recs).endswith("\n")


def test_label_conflict_raises():
    g = standard_sphere(5)
    part = classify([g, g], budget=10, passes=1)
    label_classes(part, {"S4": 0})
    with pytest.raises(ConflictingLabels):
        label_classes(part, {"CP2": 1})


def test_label_fallback_applies_to_single_unlabelled_class(cp2):
    g = standard_sphere(5)
    part = classify([g, cp2], budget=10, passes=1)
    assert len(part.classes()) == 2
    label_classes(part, {"S4": 0}, fallback="CP2")
    labels = {r["label"] for r in partition_report(part)}
    assert labels == {"S4", "CP2"}
