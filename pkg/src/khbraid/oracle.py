"""Cube-of-resolutions Khovanov homology: the classical construction.

Deliberately independent of the arc-algebra pipeline -- the only shared
code is the Frobenius algebra V and the homology routine -- so that the
agreement of the two paths is a meaningful cross-check.

Diagrams are lists of crossings; each crossing is a 4-tuple of edge labels
read counterclockwise from the incoming under-strand, plus its sign.  The
0-smoothing joins (a,b) and (c,d), the 1-smoothing (a,d) and (b,c).  The
complex is shifted by [-n_minus]{n_plus - 2 n_minus} as usual.
"""

from __future__ import annotations

from dataclasses import dataclass

from .homalg import BigradedGroup, FreeComplex, homology
from .tqft import mask_merge, mask_split, mask_qdeg


@dataclass(frozen=True)
class Crossing:
    edges: tuple[int, int, int, int]  # ccw from incoming under-strand
    sign: int

    def smoothing(self, bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
        a, b, c, d = self.edges
        return ((a, b), (c, d)) if bit == 0 else ((a, d), (b, c))


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    free_loops: int = 0

    @property
    def n_plus(self) -> int:
        return sum(1 for x in self.crossings if x.sign == 1)

    @property
    def n_minus(self) -> int:
        return sum(1 for x in self.crossings if x.sign == -1)

    def edge_labels(self) -> list[int]:
        labels = {e for x in self.crossings for e in x.edges}
        return sorted(labels)

    def validate(self):
        counts: dict[int, int] = {}
        for x in self.crossings:
            if x.sign not in (1, -1):
                raise ValueError(f"crossing sign must be +-1: {x}")
            for e in x.edges:
                counts[e] = counts.get(e, 0) + 1
        bad = {e: k for e, k in counts.items() if k != 2}
        if bad:
            raise ValueError(f"each edge label must appear exactly twice, got {bad}")


# ---------------------------------------------------------------------------
# braid closures to diagrams


def _closure_edges(strands: int, letters) -> dict[tuple[int, int], int]:
    """Edge ids for the braid closure, one per (level, strand position).

    Level r sits below letter row r; levels are cyclic (level m = level 0),
    which performs the closure.  Positions a letter row does not touch pass
    straight through, so their lower and upper segments are the same edge.
    """
    m = len(letters)
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for r, (i, _s) in enumerate(letters):
        up = (r + 1) % m
        for pos in range(1, strands + 1):
            if pos not in (i, i + 1):
                parent[find((r, pos))] = find((up, pos))
    ids: dict[tuple[int, int], int] = {}
    reps: dict[tuple[int, int], int] = {}
    for r in range(m):
        for pos in range(1, strands + 1):
            rep = find((r, pos))
            if rep not in reps:
                reps[rep] = len(reps) + 1
            ids[(r, pos)] = reps[rep]
    return ids


def braid_to_pd(b) -> Diagram:
    """Trace-closure diagram of a braid word (a linkinv.BraidWord or any
    object with .strands and .letters)."""
    letters = list(b.letters)
    m = len(letters)
    if m == 0:
        return Diagram((), free_loops=b.strands)
    ids = _closure_edges(b.strands, letters)
    crossings = []
    for r, (i, s) in enumerate(letters):
        up = (r + 1) % m
        A = ids[(r, i)]  # bottom-left
        B = ids[(r, i + 1)]  # bottom-right
        C = ids[(up, i)]  # top-left
        D = ids[(up, i + 1)]  # top-right
        if s == 1:
            crossings.append(Crossing((B, D, C, A), 1))  # under-strand B -> C
        else:
            crossings.append(Crossing((A, B, D, C), -1))  # under-strand A -> D
    # strand positions never touched by any letter close into free loops
    touched = {i for (i, _s) in letters} | {i + 1 for (i, _s) in letters}
    loops = sum(1 for pos in range(1, b.strands + 1) if pos not in touched)
    diag = Diagram(tuple(crossings), free_loops=loops)
    diag.validate()
    return diag


def braid_to_pd_resolved(b, c: int) -> tuple[Diagram, int]:
    """Diagram of the closure with letter c replaced by its unoriented
    smoothing, crossing signs adjusted for the induced reorientation.

    Returns (diagram, v) where v is the signed number of crossings between
    the arc leaving the resolved crossing's top-left corner and the other
    components of the complement; exactly the strands on that arc reverse.
    """
    letters = list(b.letters)
    m = len(letters)
    if not 0 <= c < m:
        raise ValueError("crossing index out of range")
    ids = _closure_edges(b.strands, letters)

    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x: int, y: int):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    ic = letters[c][0]
    for r, (i, _s) in enumerate(letters):
        up = (r + 1) % m
        for pos in range(1, b.strands + 1):
            if r == c and pos in (i, i + 1):
                continue
            if pos == i and r != c:
                union(ids[(r, i)], ids[(up, i + 1)])
            elif pos == i + 1 and r != c:
                union(ids[(r, i + 1)], ids[(up, i)])
            elif pos not in (i, i + 1):
                union(ids[(r, pos)], ids[(up, pos)])
    arc = find(ids[((c + 1) % m, ic)])  # component of the top-left corner

    v = 0
    new_crossings = []
    for r, (i, s) in enumerate(letters):
        if r == c:
            continue
        lo1, lo2 = ids[(r, i)], ids[(r, i + 1)]
        on_arc = (find(lo1) == arc, find(lo2) == arc)
        sign = s
        if on_arc[0] != on_arc[1]:
            v += s
            sign = -s  # exactly one strand reverses: crossing sign flips
        up = (r + 1) % m
        A, B, C, D = ids[(r, i)], ids[(r, i + 1)], ids[(up, i)], ids[(up, i + 1)]
        # tuple from the original geometry (which strand is over does not
        # change under reorientation); only the recorded sign flips, and with
        # it the global [-n_minus]{n_plus - 2 n_minus} shifts.  Both
        # smoothing pairings are rotation-invariant, so the stale "ccw from
        # incoming under" base point is harmless.
        if s == 1:
            new_crossings.append(Crossing((B, D, C, A), sign))
        else:
            new_crossings.append(Crossing((A, B, D, C), sign))

    # contract the resolved crossing: cup joins the two lower edges, cap the
    # two upper ones
    up = (c + 1) % m
    join = {}

    def rep(e: int) -> int:
        while e in join:
            e = join[e]
        return e

    pairs = [
        (ids[(c, ic)], ids[(c, ic + 1)]),
        (ids[(up, ic)], ids[(up, ic + 1)]),
    ]
    for e1, e2 in pairs:
        r1, r2 = rep(e1), rep(e2)
        if r1 != r2:
            join[max(r1, r2)] = min(r1, r2)
    relabeled = tuple(
        Crossing(tuple(rep(e) for e in x.edges), x.sign) for x in new_crossings
    )
    used = {e for x in relabeled for e in x.edges}
    # a resolved loop with no remaining crossings becomes a free loop
    survivors = {rep(ids[(c, ic)]), rep(ids[(up, ic)])}
    loops = sum(1 for e in survivors if e not in used)
    # strands untouched by any letter stay free loops
    touched = {i for (i, _s) in letters} | {i + 1 for (i, _s) in letters}
    loops += sum(1 for pos in range(1, b.strands + 1) if pos not in touched)
    diag = Diagram(relabeled, free_loops=loops)
    diag.validate()
    return diag, v


# ---------------------------------------------------------------------------
# PD text format


def format_pd(d: Diagram) -> str:
    """One "X<sign>(a,b,c,d)" line per crossing; explicit signs make the
    format self-contained (plain "X(...)" is accepted on input when the sign
    can be inferred from consecutive edge numbering)."""
    lines = [f"X{'+' if x.sign == 1 else '-'}({','.join(map(str, x.edges))})" for x in d.crossings]
    for _ in range(d.free_loops):
        lines.append("O()")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_pd(text: str) -> Diagram:
    """Parse the PD text format; infers signs of plain X(...) crossings from
    the convention that edge numbers increase along each component."""
    crossings = []
    loops = 0
    plain: list[tuple[int, int, int, int]] = []
    for raw in text.replace(";", "\n").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("O()", "O"):
            loops += 1
            continue
        if not (line.startswith("X") and line.endswith(")")):
            raise ValueError(f"bad PD line: {line!r}")
        body = line[line.index("(") + 1 : -1]
        head = line[1 : line.index("(")]
        a, b, c, d = (int(t) for t in body.replace(",", " ").split())
        if head == "+":
            crossings.append(Crossing((a, b, c, d), 1))
        elif head == "-":
            crossings.append(Crossing((a, b, c, d), -1))
        elif head == "":
            plain.append((a, b, c, d))
        else:
            raise ValueError(f"bad PD line: {line!r}")
    if plain:
        total = 2 * (len(plain) + len(crossings))
        for a, b, c, d in plain:
            if (b - d) % total == 1:
                crossings.append(Crossing((a, b, c, d), 1))
            elif (d - b) % total == 1:
                crossings.append(Crossing((a, b, c, d), -1))
            else:
                raise ValueError(
                    f"cannot infer sign of X({a},{b},{c},{d}); use X+/X- syntax"
                )
    diag = Diagram(tuple(crossings), free_loops=loops)
    diag.validate()
    return diag


# ---------------------------------------------------------------------------
# the cube


def _vertex_circles(d: Diagram, vertex: int) -> list[frozenset[int]]:
    """Circles of the complete smoothing chosen by the bits of ``vertex``."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x: int, y: int):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for t, x in enumerate(d.crossings):
        for e1, e2 in x.smoothing(vertex >> t & 1):
            union(e1, e2)
    comps: dict[int, set[int]] = {}
    for e in d.edge_labels():
        comps.setdefault(find(e), set()).add(e)
    return sorted((frozenset(s) for s in comps.values()), key=min)


def cube_complex(d: Diagram, sign_rule: str = "below") -> FreeComplex:
    """The Khovanov complex of the diagram as a free bigraded complex.

    sign_rule "below" is the standard edge sign (-1)^{set bits below the
    flipped coordinate}; "above" is an alternative consistent rule that
    yields isomorphic homology (a tested property).
    """
    d.validate()
    m = len(d.crossings)
    np_, nm = d.n_plus, d.n_minus
    circles_at = [_vertex_circles(d, v) for v in range(1 << m)]

    # basis: per vertex, generators are label masks over its circles (free
    # loops occupy the top mask bits)
    offset: list[int] = []
    basis: dict[int, list[int]] = {}
    for v in range(1 << m):
        circ = circles_at[v]
        r = bin(v).count("1")
        h = r - nm
        degs = basis.setdefault(h, [])
        offset.append(len(degs))
        nloops = len(circ) + d.free_loops
        for mask in range(1 << nloops):
            degs.append(mask_qdeg(mask, nloops) + r + np_ - 2 * nm)

    mats: dict[int, dict[tuple[int, int], int]] = {}
    for v in range(1 << m):
        r = bin(v).count("1")
        h = r - nm
        src_circ = circles_at[v]
        n_src = len(src_circ) + d.free_loops
        for t in range(m):
            if v >> t & 1:
                continue
            w = v | 1 << t
            if sign_rule == "below":
                sign = -1 if bin(v & ((1 << t) - 1)).count("1") % 2 else 1
            elif sign_rule == "above":
                sign = -1 if bin(v >> (t + 1)).count("1") % 2 else 1
            else:
                raise ValueError(f"unknown sign rule {sign_rule!r}")
            tgt_circ = circles_at[w]
            # unchanged circles correspond by equality of edge sets
            tgt_pos = {circ: k for k, circ in enumerate(tgt_circ)}
            changed_src = [k for k, circ in enumerate(src_circ) if circ not in tgt_pos]
            changed_tgt = [k for k, circ in enumerate(tgt_circ) if circ not in set(src_circ)]
            mat = mats.setdefault(h, {})
            for mask in range(1 << n_src):
                state = {mask: sign}
                if len(changed_src) == 2:
                    ka, kb = changed_src
                    (kt,) = changed_tgt
                    state = mask_merge(state, 1 << ka, 1 << kb, 1 << (n_src + 1))
                    moved = {}
                    for mm, cc in state.items():
                        out = _repack(mm, src_circ, tgt_circ, d.free_loops, n_src + 1, kt)
                        moved[out] = moved.get(out, 0) + cc
                    state = moved
                elif len(changed_src) == 1:
                    (ka,) = changed_src
                    kt1, kt2 = changed_tgt
                    state = mask_split(state, 1 << ka, 1 << (n_src + 1), 1 << (n_src + 2))
                    moved = {}
                    for mm, cc in state.items():
                        out = _repack2(mm, src_circ, tgt_circ, d.free_loops, n_src + 1, kt1, kt2)
                        moved[out] = moved.get(out, 0) + cc
                    state = moved
                else:
                    raise AssertionError("crossing flip must change circles")
                col = offset[v] + mask
                for mm, cc in state.items():
                    row = offset[w] + mm
                    key = (row, col)
                    mat[key] = mat.get(key, 0) + cc
    out = FreeComplex(basis, {h: {k: x for k, x in mm.items() if x} for h, mm in mats.items()})
    out.check_d2()
    return out


def _repack(mask: int, src_circ, tgt_circ, free: int, tmp_bit: int, kt: int) -> int:
    """Move labels from source circle order to target order after a merge."""
    out = 0
    tgt_index = {circ: k for k, circ in enumerate(tgt_circ)}
    for k, circ in enumerate(src_circ):
        if circ in tgt_index and mask >> k & 1:
            out |= 1 << tgt_index[circ]
    if mask >> tmp_bit & 1:
        out |= 1 << kt
    # free loops occupy the top bits, in both source and target
    n_src_real = len(src_circ)
    n_tgt_real = len(tgt_circ)
    for f in range(free):
        if mask >> (n_src_real + f) & 1:
            out |= 1 << (n_tgt_real + f)
    return out


def _repack2(mask: int, src_circ, tgt_circ, free: int, tmp_bit: int, kt1: int, kt2: int) -> int:
    out = 0
    tgt_index = {circ: k for k, circ in enumerate(tgt_circ)}
    for k, circ in enumerate(src_circ):
        if circ in tgt_index and mask >> k & 1:
            out |= 1 << tgt_index[circ]
    if mask >> tmp_bit & 1:
        out |= 1 << kt1
    if mask >> (tmp_bit + 1) & 1:
        out |= 1 << kt2
    n_src_real = len(src_circ)
    n_tgt_real = len(tgt_circ)
    for f in range(free):
        if mask >> (n_src_real + f) & 1:
            out |= 1 << (n_tgt_real + f)
    return out


def cube_homology(d: Diagram, coefficients: str = "Z", sign_rule: str = "below") -> BigradedGroup:
    """Bigraded Khovanov homology from the cube of resolutions."""
    return homology(cube_complex(d, sign_rule), coefficients)
