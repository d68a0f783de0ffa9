import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rar.arrayset import (
    Arrayset,
    aset_add,
    aset_del,
    aset_element_prev_from,
    aset_init,
    aset_is_element,
    aset_len,
    aset_len_free,
)
from rar.harness import chains_partition, free_head_used_head_relation, model_of


def test_init_threads_free_list_ascending():
    s = aset_init(5)
    assert s.free_head == 0
    assert s.used_head == 5
    assert s.anext == (1, 2, 3, 4, 5)


def test_init_is_empty_set():
    assert model_of(aset_init(256)) == set()
    assert aset_len(aset_init(5)) == 0
    assert aset_len_free(aset_init(5)) == 5


def test_init_rejects_zero_capacity():
    with pytest.raises(ValueError):
        aset_init(0)


def test_add_into_worked_example_state(s0):
    s1 = aset_add(44, s0)
    assert s1.free_head == 3
    assert s1.avals[2] == 44
    assert s1.anext[2] == 1
    assert s1.used_head == 2


def test_add_to_full_set_is_identity(s0):
    full = Arrayset(anext=s0.anext, avals=s0.avals, free_head=5, used_head=1)
    assert aset_add(7, full) == full


def test_add_of_present_value_is_identity(s0):
    assert aset_add(33, s0) == s0
    assert aset_add(22, s0) == s0


def test_del_interior_element(s0):
    s = aset_del(22, s0)
    assert s.used_head == 1
    assert s.anext[1] == 5
    assert s.free_head == 0
    assert s.anext[0] == 2
    assert model_of(s) == {33}


def test_del_head_element(s0):
    s = aset_del(33, s0)
    assert s.used_head == 0
    assert s.anext[1] == 2
    assert s.free_head == 1
    assert model_of(s) == {22}


def test_del_from_empty_is_identity():
    assert aset_del(7, aset_init(5)) == aset_init(5)


def test_del_absent_value_is_identity(s0):
    assert aset_del(99, s0) == s0


def test_membership(s0):
    assert aset_is_element(33, s0)
    assert aset_is_element(22, s0)
    assert not aset_is_element(44, s0)
    assert not aset_is_element(0, aset_init(5))


def test_prev_from(s0):
    assert aset_element_prev_from(1, 22, s0) == 1
    assert aset_element_prev_from(1, 99, s0) == 5
    assert aset_element_prev_from(5, 22, s0) == 5


def test_lengths(s0):
    assert aset_len(s0) == 2
    assert aset_len_free(s0) == 3
    full = Arrayset(anext=s0.anext, avals=s0.avals, free_head=5, used_head=1)
    assert aset_len_free(full) == 0


def test_del_leaves_avals_untouched(s0):
    # Only links change on delete; the old value stays in the slot.
    s = aset_del(22, s0)
    assert s.avals == s0.avals


ops_strategy = st.lists(
    st.tuples(st.sampled_from(["add", "del"]), st.integers(min_value=0, max_value=9)),
    max_size=40,
)


def _apply(ops, capacity):
    s = aset_init(capacity)
    oracle: set[int] = set()
    for tag, v in ops:
        if tag == "add":
            if len(oracle) < capacity:
                oracle.add(v)
            s = aset_add(v, s)
        else:
            oracle.discard(v)
            s = aset_del(v, s)
    return s, oracle


@settings(max_examples=250, deadline=None)
@given(ops=ops_strategy, capacity=st.integers(min_value=1, max_value=7))
def test_reachable_states_match_the_set_model(ops, capacity):
    s, oracle = _apply(ops, capacity)
    assert model_of(s) == oracle


@settings(max_examples=250, deadline=None)
@given(ops=ops_strategy, capacity=st.integers(min_value=1, max_value=7))
def test_reachable_states_keep_structural_invariants(ops, capacity):
    s, _ = _apply(ops, capacity)
    assert aset_len(s) + aset_len_free(s) == capacity
    assert chains_partition(s)
    assert free_head_used_head_relation(s)
