"""Reference implementation of the fixed-capacity array-backed set.

A single `anext` array threads two disjoint singly-linked lists through the
slot indices: the used list (occupied slots, values in `avals`) and the free
list. Both lists are terminated by the sentinel value `capacity`. All
operations are pure: state in, state out.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Arrayset:
    anext: tuple[int, ...]
    avals: tuple[int, ...]
    free_head: int
    used_head: int

    @property
    def capacity(self) -> int:
        return len(self.anext)


def aset_init(capacity: int) -> Arrayset:
    """Fresh empty set: free list threads all slots in ascending order."""
    if capacity < 1:
        raise ValueError("capacity must be at least 1")
    return Arrayset(
        anext=tuple(range(1, capacity + 1)),
        avals=(0,) * capacity,
        free_head=0,
        used_head=capacity,
    )


def aset_is_element(val: int, aset: Arrayset) -> bool:
    """Membership via a bounded walk of the used list (at most capacity steps)."""
    arr_sz = aset.capacity
    curr_index = aset.used_head
    found = False
    for _ in range(arr_sz):
        if curr_index < arr_sz:
            if aset.avals[curr_index] == val:
                found = True
            curr_index = aset.anext[curr_index]
    return found


def aset_add(val: int, aset: Arrayset) -> Arrayset:
    """Add val: no-op when the set is full or val is already present."""
    arr_sz = aset.capacity
    curr_index = aset.free_head

    if curr_index >= arr_sz:
        return aset  # full
    if aset.used_head < arr_sz and aset_is_element(val, aset):
        return aset

    anext = list(aset.anext)
    avals = list(aset.avals)
    free_head = anext[aset.free_head]
    avals[curr_index] = val
    anext[curr_index] = aset.used_head
    return Arrayset(tuple(anext), tuple(avals), free_head, curr_index)


def aset_element_prev_from(start: int, val: int, aset: Arrayset) -> int:
    """First index previ on the chain from start (inclusive) such that
    anext[previ] < capacity and avals[anext[previ]] == val; capacity if none.
    """
    arr_sz = aset.capacity
    previ = start
    result = arr_sz
    for _ in range(arr_sz):
        if previ < arr_sz and result >= arr_sz:
            nxt = aset.anext[previ]
            if nxt < arr_sz and aset.avals[nxt] == val:
                result = previ
            else:
                previ = nxt
    return result


def aset_del(val: int, aset: Arrayset) -> Arrayset:
    """Remove val: unlink its slot from the used list, push it on the free
    list. The slot's avals entry is left untouched; only links change."""
    arr_sz = aset.capacity
    curr_index = aset.used_head

    if aset.used_head >= arr_sz:
        return aset  # empty

    anext = list(aset.anext)

    if aset.avals[curr_index] == val:
        # Head of the used list holds val.
        used_head = anext[curr_index]
        anext[curr_index] = aset.free_head
        return Arrayset(tuple(anext), aset.avals, curr_index, used_head)

    prev_index = aset_element_prev_from(aset.used_head, val, aset)
    if prev_index >= arr_sz:
        return aset  # absent
    curr_index = anext[prev_index]
    if curr_index >= arr_sz:
        return aset

    anext[prev_index] = anext[curr_index]
    anext[curr_index] = aset.free_head
    return Arrayset(tuple(anext), aset.avals, curr_index, aset.used_head)


def _chain_len(head: int, anext: tuple[int, ...]) -> int:
    arr_sz = len(anext)
    curr = head
    count = 0
    for _ in range(arr_sz):
        if curr < arr_sz:
            count += 1
            curr = anext[curr]
    return count


def aset_len(aset: Arrayset) -> int:
    """Number of used-list steps to the terminator, capped at capacity."""
    return _chain_len(aset.used_head, aset.anext)


def aset_len_free(aset: Arrayset) -> int:
    """Number of free-list steps to the terminator, capped at capacity."""
    return _chain_len(aset.free_head, aset.anext)
