"""Cup, cap and twist functors on complexes of projectives.

The twist attached to a braid letter is a mapping cone on the unit or
counit of the cup/cap adjunction:

* positive crossing:  Cone(C -> (cup_i cap_i C){+1})   (cone of the unit)
* negative crossing:  Cone((cup_i cap_i C){-1} -> C)   (cone of the counit)

On a summand P_a the endofunctor cup_i cap_i is P_{a'} for the resurgered
matching a' when a does not contain the arc (i, i+1), and P_a{+1} (+)
P_a{-1} when it does (the closed circle becomes a V factor, labels 1, x).
Morphisms transform by a single saddle surgery at (i, i+1) on their circle
diagrams; closed-circle labels on the source side select the summand by the
Frobenius pairing (label x feeds the 1-summand and vice versa), on the
target side directly.

Unit and counit act on a cup-containing summand by the identity into/out of
the x-labeled summand and by multiplication with the degree-2 center
element at i into/out of the 1-labeled summand; on other summands by the
minimal-degree generator of the codimension-one block.  All coefficients
are +1.
"""

from __future__ import annotations

from functools import lru_cache

from .planar import Matching, circles, cap_apply, cup_insert, cupcap_through
from .arcalg import ArcCombination, idempotent
from .homalg import Complex, ModuleMap, ProjSummand, cone, is_chain_map


# ---------------------------------------------------------------------------
# cup functor


@lru_cache(maxsize=None)
def _cup_circle_map(i: int, u: Matching, v: Matching) -> tuple[int, tuple[int, ...]]:
    """(index of the new small circle, old circle index -> new index)."""
    cu, cv = cup_insert(i, u), cup_insert(i, v)
    big = circles(cu, cv)
    small = big.circle_of(i)
    old = circles(u, v)
    shift = lambda p: p if p < i else p + 2
    remap = tuple(big.circle_of(shift(circ[0])) for circ in old.circles)
    return small, remap


def _cup_entry(i: int, g: ArcCombination) -> ArcCombination:
    """Kunneth embedding of a block element: new (i,i+1) circle labeled 1."""
    small, remap = _cup_circle_map(i, g.source, g.target)
    terms: dict[int, int] = {}
    for m, c in g.terms.items():
        mm = 0
        for k, kk in enumerate(remap):
            if m >> k & 1:
                mm |= 1 << kk
        terms[mm] = terms.get(mm, 0) + c
    return ArcCombination(cup_insert(i, g.source), cup_insert(i, g.target), terms)


def cup_functor(i: int, C: Complex) -> Complex:
    """P_w{q} -> P_{cup_insert(i,w)}{q}; morphisms embed with the new circle
    labeled 1.  A strict functor: composition is preserved exactly."""
    terms = {
        h: tuple(ProjSummand(cup_insert(i, s.matching), s.qshift) for s in t)
        for h, t in C.terms.items()
    }
    diffs = {}
    for h, d in C.diffs.items():
        diffs[h] = ModuleMap(
            terms[h], terms[h + 1], {rc: _cup_entry(i, g) for rc, g in d.entries.items()}
        )
    return Complex(terms, diffs, check=False)


# ---------------------------------------------------------------------------
# the saddle surgery on a morphism's circle diagram


@lru_cache(maxsize=None)
def _saddle_schedule(a: Matching, b: Matching, i: int):
    """Combinatorics of the (i, i+1) saddle on C(a, b).

    Returns (op, capped_slots, closed_a_slot, closed_b_slot) where slots
    index the components after surgery: circle k of C(a,b) keeps slot k if
    untouched; a merge creates slot c, a split slots c, c+1 (c = circle
    count of C(a,b)).  capped_slots[k] is the slot carrying circle k of
    circles(cap(a), cap(b)); closed_*_slot is the slot of the circle closed
    off on that side, or None.
    """
    n = a.n
    diag = circles(a, b)
    c = diag.c

    def node_a(p):
        return (p, "a") if p in (i, i + 1) else p

    def node_b(p):
        return (p, "b") if p in (i, i + 1) else p

    adj: dict[object, list[object]] = {}

    def link(x, y):
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)

    for p, q in a.pairs:
        link(node_a(p), node_a(q))
    for p, q in b.pairs:
        link(node_b(p), node_b(q))
    link((i, "a"), (i + 1, "a"))
    link((i, "b"), (i + 1, "b"))

    def component(start) -> frozenset:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    s_i, s_i1 = diag.circle_of(i), diag.circle_of(i + 1)
    slot_of_node: dict[object, int] = {}
    if s_i != s_i1:
        op = ("m", s_i, s_i1, c)
        touched = {s_i, s_i1}
        new_slots = {frozenset(component(node_a(i))): c}
    else:
        comp1 = component((i, "a"))
        comp2 = component((i, "b"))
        assert comp1 != comp2, "saddle on one circle must split it"
        op = ("s", s_i, c, c + 1)
        touched = {s_i}
        new_slots = {comp1: c, comp2: c + 1}
    for comp, slot in new_slots.items():
        for x in comp:
            slot_of_node[x] = slot
    for k, circ in enumerate(diag.circles):
        if k in touched:
            continue
        for p in circ:
            for nd in (node_a(p), node_b(p)):
                slot_of_node[nd] = k

    a_down, _ = cap_apply(i, a)
    b_down, _ = cap_apply(i, b)
    down = circles(a_down, b_down)
    unshifted = lambda p: p if p < i else p + 2
    capped_slots = tuple(slot_of_node[unshifted(circ[0])] for circ in down.circles)
    closed_a = slot_of_node[(i, "a")] if (i, i + 1) in a.pairs else None
    closed_b = slot_of_node[(i, "b")] if (i, i + 1) in b.pairs else None
    return op, capped_slots, closed_a, closed_b


def _saddle_terms(a: Matching, b: Matching, i: int, g: ArcCombination):
    """Apply the saddle to every term of g.

    Yields (big_mask, p_bit, q_bit, coeff): big_mask labels circles of
    circles(cap a, cap b); p_bit / q_bit are the labels (1 = x) of the
    circles closed off on the a / b side, or None.
    """
    op, capped_slots, closed_a, closed_b = _saddle_schedule(a, b, i)
    state = dict(g.terms)
    from .tqft import mask_merge, mask_split

    if op[0] == "m":
        state = mask_merge(state, 1 << op[1], 1 << op[2], 1 << op[3])
    else:
        state = mask_split(state, 1 << op[1], 1 << op[2], 1 << op[3])
    for mask, coeff in state.items():
        big = 0
        for k, slot in enumerate(capped_slots):
            if mask >> slot & 1:
                big |= 1 << k
        p = (mask >> closed_a) & 1 if closed_a is not None else None
        q = (mask >> closed_b) & 1 if closed_b is not None else None
        yield big, p, q, coeff


# ---------------------------------------------------------------------------
# cap functor


def _cap_summands(i: int, s: ProjSummand) -> list[tuple[ProjSummand, int | None]]:
    """Image summands of P_w{t} under cap_i, tagged by the V label bit
    (None: no circle closed; 0: label 1, shift +1; 1: label x, shift -1)."""
    down, closed = cap_apply(i, s.matching)
    if not closed:
        return [(ProjSummand(down, s.qshift), None)]
    return [
        (ProjSummand(down, s.qshift + 1), 0),
        (ProjSummand(down, s.qshift - 1), 1),
    ]


def _transformed_components(
    i: int, a: Matching, b: Matching, g: ArcCombination, recup: bool
) -> dict[tuple[int | None, int | None], ArcCombination]:
    """Saddle transform of g, split into (source label, target label) parts.

    The source circle label p addresses the summand with the complementary
    label (Frobenius pairing), so components are keyed by u = 1 - p there;
    the target label keys directly.  With ``recup`` the entries are
    re-embedded into blocks over the resurgered matchings with the new
    (i,i+1) circle labeled 1.
    """
    a_down, _ = cap_apply(i, a)
    b_down, _ = cap_apply(i, b)
    comps: dict[tuple[int | None, int | None], dict[int, int]] = {}
    for big, p, q, coeff in _saddle_terms(a, b, i, g):
        u = (1 - p) if p is not None else None
        key = (u, q)
        d = comps.setdefault(key, {})
        d[big] = d.get(big, 0) + coeff
    out = {}
    for key, terms in comps.items():
        gg = ArcCombination(a_down, b_down, terms)
        if recup:
            gg = _cup_entry(i, gg)
        if gg:
            out[key] = gg
    return out


def _apply_summandwise(
    i: int, C: Complex, summand_images, entry_components
) -> tuple[Complex, dict[int, list[list[int]]]]:
    """Shared expansion machinery for cap_i and cup_i cap_i.

    summand_images(s) -> [(ProjSummand, label-or-None)];
    entry_components(a, b, g) -> {(u, v): entry}.
    Returns the complex and a layout: layout[h][k] = flat indices of the
    images of summand k (in label order 1, x)."""
    terms: dict[int, tuple[ProjSummand, ...]] = {}
    layout: dict[int, list[list[int]]] = {}
    labels: dict[int, list[list[int | None]]] = {}
    for h, summands in C.terms.items():
        flat: list[ProjSummand] = []
        lay: list[list[int]] = []
        labs: list[list[int | None]] = []
        for s in summands:
            images = summand_images(s)
            lay.append(list(range(len(flat), len(flat) + len(images))))
            labs.append([u for _, u in images])
            flat.extend(ps for ps, _ in images)
        terms[h] = tuple(flat)
        layout[h] = lay
        labels[h] = labs
    diffs: dict[int, ModuleMap] = {}
    for h, d in C.diffs.items():
        entries: dict[tuple[int, int], ArcCombination] = {}
        for (r, c), g in d.entries.items():
            a = C.terms[h][c].matching
            b = C.terms[h + 1][r].matching
            comps = entry_components(a, b, g)
            for (u, v), gg in comps.items():
                src_positions = layout[h][c]
                src_labels = labels[h][c]
                tgt_positions = layout[h + 1][r]
                tgt_labels = labels[h + 1][r]
                for sp, su in zip(src_positions, src_labels):
                    if su != u:
                        continue
                    for tp, tv in zip(tgt_positions, tgt_labels):
                        if tv != v:
                            continue
                        entries[(tp, sp)] = entries.get(
                            (tp, sp), ArcCombination(gg.source, gg.target, {})
                        ) + gg
        diffs[h] = ModuleMap(terms[h], terms[h + 1], entries)
    return Complex(terms, diffs, check=False), layout


def cap_functor(i: int, C: Complex) -> Complex:
    """cap_i: complexes over H_n -> complexes over H_{n-1}."""
    D, _ = _apply_summandwise(
        i,
        C,
        lambda s: _cap_summands(i, s),
        lambda a, b, g: _transformed_components(i, a, b, g, recup=False),
    )
    return D


def _cupcap_summands(i: int, s: ProjSummand) -> list[tuple[ProjSummand, int | None]]:
    through, closed = cupcap_through(i, s.matching)
    if not closed:
        return [(ProjSummand(through, s.qshift), None)]
    return [
        (ProjSummand(through, s.qshift + 1), 0),
        (ProjSummand(through, s.qshift - 1), 1),
    ]


def cupcap_functor(i: int, C: Complex) -> tuple[Complex, dict[int, list[list[int]]]]:
    """The endofunctor cup_i cap_i, with the layout of image summands."""
    return _apply_summandwise(
        i,
        C,
        lambda s: _cupcap_summands(i, s),
        lambda a, b, g: _transformed_components(i, a, b, g, recup=True),
    )


# ---------------------------------------------------------------------------
# unit and counit


def _x_at(i: int, w: Matching) -> ArcCombination:
    """x on the circle of C(w,w) through point i, 1 elsewhere (= v_i e_w)."""
    k = circles(w, w).circle_of(i)
    return ArcCombination(w, w, {1 << k: 1})


def _alpha(a: Matching, b: Matching) -> ArcCombination:
    return ArcCombination(a, b, {0: 1})


def unit_map(i: int, C: Complex) -> tuple[dict[int, ModuleMap], Complex]:
    """The chain map C -> (cup_i cap_i C){1} and its target."""
    D0, layout = cupcap_functor(i, C)
    D = D0.shift_q(1)
    f: dict[int, ModuleMap] = {}
    for h, summands in C.terms.items():
        entries: dict[tuple[int, int], ArcCombination] = {}
        for k, s in enumerate(summands):
            a = s.matching
            positions = layout[h][k]
            if (i, i + 1) in a.pairs:
                entries[(positions[1], k)] = idempotent(a)  # into the x summand
                entries[(positions[0], k)] = _x_at(i, a)  # into the 1 summand
            else:
                through, _ = cupcap_through(i, a)
                entries[(positions[0], k)] = _alpha(a, through)
        f[h] = ModuleMap(C.terms[h], D.terms[h], entries)
    if not is_chain_map(f, C, D):
        raise AssertionError(f"unit at position {i} failed the chain-map check")
    return f, D


def counit_map(i: int, C: Complex) -> tuple[dict[int, ModuleMap], Complex]:
    """The chain map (cup_i cap_i C){-1} -> C and its source."""
    D0, layout = cupcap_functor(i, C)
    D = D0.shift_q(-1)
    f: dict[int, ModuleMap] = {}
    for h, summands in C.terms.items():
        entries: dict[tuple[int, int], ArcCombination] = {}
        for k, s in enumerate(summands):
            a = s.matching
            positions = layout[h][k]
            if (i, i + 1) in a.pairs:
                entries[(k, positions[0])] = idempotent(a)  # from the 1 summand
                entries[(k, positions[1])] = _x_at(i, a)  # from the x summand
            else:
                through, _ = cupcap_through(i, a)
                entries[(k, positions[0])] = _alpha(through, a)
        f[h] = ModuleMap(D.terms[h], C.terms[h], entries)
    if not is_chain_map(f, D, C):
        raise AssertionError(f"counit at position {i} failed the chain-map check")
    return f, D


# ---------------------------------------------------------------------------
# twists


def twist(i: int, sign: int, C: Complex) -> Complex:
    """Mapping-cone twist for one braid letter at strand position i.

    sign +1 builds Cone(C -> (cup cap C){1}) (unit), sign -1 builds
    Cone((cup cap C){-1} -> C) (counit).  Gradings are raw here; the link
    pipeline applies the calibrated per-letter offsets at the end.
    """
    if sign == 1:
        f, D = unit_map(i, C)
        return cone(f, C, D)
    if sign == -1:
        f, D = counit_map(i, C)
        return cone(f, D, C)
    raise ValueError("sign must be +1 or -1")


# ---------------------------------------------------------------------------
# verification suites over the functor layer


def _all_truncated_homologies(n: int, C: Complex) -> dict:
    from .planar import enumerate_matchings
    from .homalg import idempotent_truncate, homology, eliminate

    out = {}
    for a in enumerate_matchings(n):
        out[a] = homology(idempotent_truncate(a, eliminate(C)), "Z")
    return out


def _twist_word(word, C: Complex) -> Complex:
    from .homalg import eliminate

    for i, s in word:
        C = eliminate(twist(i, s, C))
    return C


def verify_braid_relations(n: int, signs=(1, -1)) -> dict:
    """Braid relations and distant commutation on e_a-homology of every P_w."""
    from .planar import enumerate_matchings

    checks = []
    positions = range(1, 2 * n)
    for w in enumerate_matchings(n):
        P = Complex.single(w)
        for s in signs:
            for i in positions:
                if i + 1 in positions:
                    lhs = _twist_word([(i, s), (i + 1, s), (i, s)], P)
                    rhs = _twist_word([(i + 1, s), (i, s), (i + 1, s)], P)
                    ok = _all_truncated_homologies(n, lhs) == _all_truncated_homologies(n, rhs)
                    checks.append({"kind": "braid", "w": str(w), "i": i, "sign": s, "ok": ok})
                for j in positions:
                    if j >= i + 2:
                        lhs = _twist_word([(i, s), (j, s)], P)
                        rhs = _twist_word([(j, s), (i, s)], P)
                        ok = (
                            _all_truncated_homologies(n, lhs)
                            == _all_truncated_homologies(n, rhs)
                        )
                        checks.append(
                            {"kind": "commute", "w": str(w), "i": i, "j": j, "sign": s, "ok": ok}
                        )
    return {"n": n, "checks": checks, "ok": all(c["ok"] for c in checks)}


def verify_twist_inverse(n: int) -> dict:
    """twist then inverse twist restores the e_a-homology of every P_w,
    up to the homological shift of one cancelling letter pair."""
    from .planar import enumerate_matchings

    checks = []
    for w in enumerate_matchings(n):
        P = Complex.single(w)
        base = _all_truncated_homologies(n, P)
        for i in range(1, 2 * n):
            for order in ((1, -1), (-1, 1)):
                C = _twist_word([(i, order[0]), (i, order[1])], P)
                got = _all_truncated_homologies(n, C)
                want = {a: H.shifted(-1, 0) for a, H in base.items()}
                ok = got == want
                checks.append({"w": str(w), "i": i, "order": order, "ok": ok})
    return {"n": n, "checks": checks, "ok": all(c["ok"] for c in checks)}
