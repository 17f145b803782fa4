"""Weak-subposet containment and chain-by-chain embeddings.

A family of sets, ordered by inclusion, *contains* a poset P when there is
an injection from P's elements to member masks that preserves strict order
(comparable elements map to strictly nested masks).  Incomparabilities need
not be preserved: containment is weak, not induced.

Three searches live here:

* :func:`contains_poset` / :func:`is_p_free` — backtracking over P's
  elements in a fixed order with nesting-consistency pruning.
* :func:`first_copy` — the canonically least copy of a blowup: copies are
  keyed by their image tuple in element order and compared lexicographically
  by mask value; depth-first search in element order with ascending
  candidates finds the least key first.
* :func:`embed_via_marked_chains` — embeds a graded poset chain by chain
  along a graded chain cover, mapping each cover chain onto the marker set
  of one marked chain.  The recursion peels the last cover chain, embeds the
  rest, then extends along the first marked chain whose already-determined
  markers match the embedded images and whose remaining markers avoid every
  image used so far.  Success is not guaranteed on small instances; a
  failure names the first cover chain that could not be assigned.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .blowup import BlowupPoset
from .errors import InvalidMarkedChainError, PreconditionError
from .grading import GradedChainCover, verify_chain_cover
from .lattice import MarkedChain, SetFamily
from .poset import Poset, hasse_graph, restrict


@dataclass(frozen=True)
class Embedding:
    """An order-preserving injection of poset elements into family members.

    ``assignment[e]`` is the image mask of poset element ``e``.
    """

    target: SetFamily
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class EmbeddingFailure:
    """Report that the chain-by-chain embedding ran out of usable chains.

    ``chain_index`` is the 1-based index of the first cover chain that
    could not be assigned a marked chain.
    """

    chain_index: int
    reason: str


def check_embedding(poset: Poset, emb: Embedding) -> list[str]:
    """All violations of the embedding contract; empty means valid."""
    problems = []
    if len(emb.assignment) != poset.m:
        return [
            f"assignment has {len(emb.assignment)} entries for {poset.m} elements"
        ]
    member_set = emb.target.member_set
    for e, mask in enumerate(emb.assignment):
        if mask not in member_set:
            problems.append(f"image {mask} of element {e} is not a member")
    if len(set(emb.assignment)) != poset.m:
        problems.append("assignment is not injective")
    for a in range(poset.m):
        for b in range(poset.m):
            if poset.less(a, b):
                lo, hi = emb.assignment[a], emb.assignment[b]
                if lo == hi or lo & hi != lo:
                    problems.append(
                        f"elements {a} < {b} map to non-nested masks {lo}, {hi}"
                    )
    return problems


def _strict_nesting(members: tuple[int, ...]) -> tuple[list[int], list[int]]:
    """Per member index, bitsets of strictly larger / smaller members."""
    q = len(members)
    above = [0] * q
    below = [0] * q
    for i, mi in enumerate(members):
        for j, mj in enumerate(members):
            if mi != mj and mi & mj == mi:
                above[i] |= 1 << j
                below[j] |= 1 << i
    return above, below


def _search_order(poset: Poset) -> list[int]:
    """Element order for backtracking: reverse min-degree strip order.

    Repeatedly removing a minimum-degree Hasse vertex and reversing yields
    an order in which, on connected Hasse graphs, every element after the
    first is adjacent to an earlier one — so each placement is constrained
    as soon as possible.
    """
    graph = hasse_graph(poset)
    degree = [graph.degree(e) for e in range(poset.m)]
    removed = [False] * poset.m
    order = []
    for _ in range(poset.m):
        v = min(
            (e for e in range(poset.m) if not removed[e]),
            key=lambda e: (degree[e], e),
        )
        order.append(v)
        removed[v] = True
        for nb in graph.adjacency[v]:
            if not removed[nb]:
                degree[nb] -= 1
    order.reverse()
    return order


def _find_assignment(
    family: SetFamily,
    poset: Poset,
    order: list[int],
    preset: dict[int, int] | None = None,
    floor: tuple[int, ...] | None = None,
) -> tuple[int, ...] | None:
    """Backtracking core shared by the general containment searches.

    Places poset elements in ``order`` (excluding ``preset`` ones, which are
    pinned to the given masks up front), trying member masks in ascending
    order; returns the first complete assignment as a mask tuple.  When
    ``floor`` is given (one mask per ``order`` position), assignments whose
    tuple sorts below it are skipped — sound whenever the caller knows no
    copy below the floor exists, and it lets repeated searches resume.
    """
    members = family.members
    q = len(members)
    if q < poset.m:
        return None
    sup_sets, sub_sets = _strict_nesting(members)
    index_of = {mask: i for i, mask in enumerate(members)}

    # an element's strict up-set must land on distinct supersets of its
    # image (and dually below), so a candidate with too few is hopeless
    sup_counts = [s.bit_count() for s in sup_sets]
    sub_counts = [s.bit_count() for s in sub_sets]
    allowed = []
    for e in range(poset.m):
        need_up = poset.above[e].bit_count()
        need_down = poset.below[e].bit_count()
        bits = 0
        for i in range(q):
            if sup_counts[i] >= need_up and sub_counts[i] >= need_down:
                bits |= 1 << i
        allowed.append(bits)

    assign = [-1] * poset.m
    used = 0
    for e, mask in (preset or {}).items():
        i = index_of.get(mask)
        if i is None:
            return None
        assign[e] = i
        used |= 1 << i
    order = [e for e in order if assign[e] < 0]

    # per position, the constraints against elements placed before it
    constraints: list[list[tuple[int, bool]]] = []
    placed = [e for e, i in enumerate(assign) if i >= 0]
    for d, e in enumerate(order):
        cons = []
        for f in placed:
            if poset.less(f, e):
                cons.append((f, True))
            elif poset.less(e, f):
                cons.append((f, False))
        constraints.append(cons)
        placed.append(e)

    full = (1 << q) - 1

    def extend(d: int, used: int, tight: bool) -> bool:
        if d == len(order):
            return True
        e = order[d]
        cand = allowed[e] & ~used
        for f, f_below in constraints[d]:
            cand &= sup_sets[assign[f]] if f_below else sub_sets[assign[f]]
        if tight:
            start = bisect_left(members, floor[d])
            cand &= full & ~((1 << start) - 1)
        while cand:
            low = cand & -cand
            cand ^= low
            i = low.bit_length() - 1
            assign[e] = i
            if extend(d + 1, used | low, tight and members[i] == floor[d]):
                return True
        assign[e] = -1
        return False

    if not extend(0, used, floor is not None):
        return None
    return tuple(members[i] for i in assign)


def contains_poset(family: SetFamily, poset: Poset) -> Embedding | None:
    """A witness embedding of ``poset`` into ``family``, or None.

    The witness is the one found first by backtracking over elements in
    reverse min-degree strip order with candidate masks ascending.
    """
    result = _find_assignment(family, poset, _search_order(poset))
    return None if result is None else Embedding(family, result)


def contains_poset_through(
    family: SetFamily, poset: Poset, mask: int
) -> Embedding | None:
    """Like :func:`contains_poset`, but some image must equal ``mask``.

    Incremental-search helper: when a family is known to avoid the poset
    and one member is added, any new copy must pass through it.
    """
    order = _search_order(poset)
    for e in range(poset.m):
        result = _find_assignment(family, poset, order, preset={e: mask})
        if result is not None:
            return Embedding(family, result)
    return None


def is_p_free(family: SetFamily, poset: Poset) -> bool:
    """True when the family contains no copy of the poset."""
    return contains_poset(family, poset) is None


def _copy_tree_order(blow: BlowupPoset) -> list[int]:
    """Blowup elements in depth-first order of the copy tree.

    Each copy is followed immediately by the fans hanging off it, so a
    backtracking search in this order discovers a starved fan right after
    placing its anchor instead of after enumerating unrelated fans.
    """
    positions = len(blow.offsets)
    pos_children: list[list[int]] = [[] for _ in range(positions + 1)]
    for j in range(2, positions + 1):
        pos_children[blow.parent_position[j - 1]].append(j)
    order: list[int] = []
    stack = [blow.id_of(1, 1)]
    while stack:
        e = stack.pop()
        order.append(e)
        i, r = blow.labels[e]
        for j in reversed(pos_children[i]):
            stack.extend(reversed(blow.group_ids(j, r)))
    return order


def _least_blowup_assignment(
    family: SetFamily, blow: BlowupPoset, floor: tuple[int, ...] | None
) -> tuple[int, ...] | None:
    """Lexicographically least embedding of a blowup, exploiting its shape.

    Three blowup-specific accelerations over the generic backtracker:

    * parent-only order constraints — nesting is transitive, so pinning each
      copy against its copy-tree parent enforces the whole order;
    * ascending fans — copies within one fan are interchangeable (swapping
      them together with the fans hanging off them relabels the same copy),
      so the least assignment carries ascending masks inside every fan and
      each non-first fan member may start above its predecessor;
    * a completability probe — before committing a mask, the remaining
      elements are test-assigned in copy-tree order, where a starved fan
      surfaces right after its anchor; in element order the same dead end
      would only surface after enumerating every combination of the
      unrelated fans placed in between.
    """
    members = family.members
    q = len(members)
    base = blow.base
    m = base.m
    if q < m:
        return None
    sup_sets, sub_sets = _strict_nesting(members)

    # demand prune: an element's strict up-set needs that many distinct
    # supersets of its image (dually below)
    sup_counts = [s.bit_count() for s in sup_sets]
    sub_counts = [s.bit_count() for s in sub_sets]
    allowed = []
    for e in range(m):
        need_up = base.above[e].bit_count()
        need_down = base.below[e].bit_count()
        bits = 0
        for i in range(q):
            if sup_counts[i] >= need_up and sub_counts[i] >= need_down:
                bits |= 1 << i
        allowed.append(bits)

    # per element: copy-tree parent (or -1), direction, and the fan
    # predecessor whose mask it must exceed (or -1)
    parent = [-1] * m
    parent_up = [True] * m
    sibling = [-1] * m
    t = blow.t
    for e, (i, r) in enumerate(blow.labels):
        if i > 1:
            j = blow.parent_position[i - 1]
            parent[e] = blow.id_of(j, (r - 1) // t + 1)
            parent_up[e] = blow.points_up[i - 1]
        if (r - 1) % t:
            sibling[e] = e - 1

    tree_order = _copy_tree_order(blow)
    assign = [-1] * m
    full = (1 << q) - 1

    def candidates(e: int, used: int) -> int:
        cand = allowed[e] & ~used
        p = parent[e]
        if p >= 0:
            cand &= sup_sets[assign[p]] if parent_up[e] else sub_sets[assign[p]]
        s = sibling[e]
        if s >= 0:
            cand &= full << (assign[s] + 1)
        return cand

    def completable(rank: int, used: int) -> bool:
        if rank == m:
            return True
        e = tree_order[rank]
        if assign[e] >= 0:
            return completable(rank + 1, used)
        cand = candidates(e, used)
        while cand:
            low = cand & -cand
            cand ^= low
            assign[e] = low.bit_length() - 1
            if completable(rank + 1, used | low):
                assign[e] = -1
                return True
        assign[e] = -1
        return False

    def extend(e: int, used: int, tight: bool) -> bool:
        if e == m:
            return True
        cand = candidates(e, used)
        if tight:
            start = bisect_left(members, floor[e])
            cand &= full & ~((1 << start) - 1)
        while cand:
            low = cand & -cand
            cand ^= low
            i = low.bit_length() - 1
            assign[e] = i
            if completable(0, used | low) and extend(
                e + 1, used | low, tight and members[i] == floor[e]
            ):
                return True
        assign[e] = -1
        return False

    if not extend(0, 0, floor is not None):
        return None
    return tuple(members[i] for i in assign)


def first_copy(
    family: SetFamily,
    blow: BlowupPoset | Poset,
    floor: tuple[int, ...] | None = None,
) -> Embedding | None:
    """The least copy of ``blow`` in ``family`` under the canonical order.

    Copies are keyed by the tuple of image masks in element order and
    compared lexicographically; searching elements in that same order with
    ascending candidates returns the least key first.  None if the family
    has no copy.

    ``floor`` skips keys below the given tuple.  That is only sound when the
    caller knows no smaller copy exists — e.g. resuming after members were
    removed from a family whose least copy key was ``floor``.
    """
    base = blow.base if isinstance(blow, BlowupPoset) else blow
    if floor is not None and len(floor) != base.m:
        raise PreconditionError("floor must assign one mask per element")
    if isinstance(blow, BlowupPoset):
        result = _least_blowup_assignment(family, blow, floor)
    else:
        result = _find_assignment(family, base, list(range(base.m)), floor=floor)
    return None if result is None else Embedding(family, result)


def _chain_position(chain: tuple[int, ...], ival: frozenset[int]) -> str:
    """Whether the difference set sits at the bottom or top of its chain."""
    if len(ival) >= len(chain) or not ival:
        raise PreconditionError(
            "difference set must be a nonempty proper part of its chain"
        )
    if chain[0] in ival:
        return "bottom"
    if chain[-1] in ival:
        return "top"
    raise PreconditionError("difference set touches neither end of its chain")


def _embed_level(
    poset: Poset,
    chains: tuple[tuple[int, ...], ...],
    intervals: tuple[tuple[int, ...], ...],
    family: SetFamily,
    pool: list[MarkedChain],
    a: int,
) -> dict[int, int] | EmbeddingFailure:
    k = len(chains[0])
    if len(chains) == 1:
        if not pool:
            return EmbeddingFailure(1, "no marked chains available")
        best = min(pool, key=lambda mc: (mc.marker_masks(), mc.perm))
        masks = best.marker_masks()  # largest first
        return {e: masks[k - 1 - pos] for pos, e in enumerate(chains[0])}

    last = chains[-1]
    ival_set = frozenset(intervals[-1])
    side = _chain_position(last, ival_set)
    ival = [e for e in last if e in ival_set]  # ascending along the chain
    rest = [e for e in last if e not in ival_set]
    s = len(rest)

    keep = [e for e in range(poset.m) if e not in ival_set]
    sub, old = restrict(poset, keep)
    to_new = {e: i for i, e in enumerate(old)}
    sub_chains = tuple(tuple(to_new[x] for x in c) for c in chains[:-1])
    sub_intervals = tuple(tuple(to_new[x] for x in iv) for iv in intervals[:-1])
    deeper = _embed_level(sub, sub_chains, sub_intervals, family, pool, a)
    if isinstance(deeper, EmbeddingFailure):
        return deeper
    partial = {old[i]: mask for i, mask in deeper.items()}

    # the embedded part of the last chain, as markers (largest first)
    key = tuple(partial[e] for e in reversed(rest))
    taken = set(partial.values())
    found = None
    for mc in sorted(pool, key=lambda mc: (mc.marker_masks(), mc.perm)):
        masks = mc.marker_masks()
        embedded = masks[:s] if side == "bottom" else masks[k - s :]
        if embedded != key:
            continue
        free = masks[s:] if side == "bottom" else masks[: k - s]
        if all(mask not in taken for mask in free):
            found = free
            break
    if found is None:
        return EmbeddingFailure(
            len(chains),
            "no marked chain extends the embedded markers without reuse",
        )
    for pos, e in enumerate(ival):
        partial[e] = found[len(found) - 1 - pos]
    return partial


def embed_via_marked_chains(
    poset: Poset,
    cover: GradedChainCover,
    family: SetFamily,
    chains: list[MarkedChain],
    a: int,
) -> Embedding | EmbeddingFailure:
    """Embed a graded poset so each cover chain lands on a marker set.

    On success every cover chain's image equals the marker set of some
    chain in ``chains`` (asserted, together with injectivity and order
    preservation).  On exhaustion, the failure names the first cover chain
    that could not be assigned.
    """
    problems = verify_chain_cover(poset, cover)
    if problems:
        raise PreconditionError(f"invalid chain cover: {problems[0]}")
    k = len(cover.chains[0])
    pool = list(chains)
    for mc in pool:
        mc.validate(family, a)
        if len(mc.marker_sizes) != k:
            raise InvalidMarkedChainError(
                f"marked chain has {len(mc.marker_sizes)} markers, cover needs {k}"
            )

    result = _embed_level(
        poset, cover.chains, cover.intervals, family, pool, a
    )
    if isinstance(result, EmbeddingFailure):
        return result
    emb = Embedding(family, tuple(result[e] for e in range(poset.m)))
    assert not check_embedding(poset, emb)
    marker_sets = {frozenset(mc.marker_masks()) for mc in pool}
    for chain in cover.chains:
        assert frozenset(emb.assignment[e] for e in chain) in marker_sets
    return emb
