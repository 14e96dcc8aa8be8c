"""Bounded complexes of q-shifted projectives P_w over H_n, and homology.

Conventions, fixed once:

* P_w is the projective with block column Hom(P_w', P_w) = labelings of
  circles(w', w); a map P_a -> P_b is an element g of block (a, b) acting by
  post-composition m -> multiply(g, m).
* The quantum degree of m in a summand P_b{t} is qdeg(m) + t, so a map
  P_a{s} -> P_b{t} is quantum-degree 0 exactly when every labeling of its
  entry has qdeg = n + s - t.  Differentials must be quantum-degree 0.
* cone(f: C -> D) has terms C^{h+1} (+) D^h and differential
  [[-d_C, 0], [f, d_D]].

Homology of the idempotent truncation is computed over Z by Smith normal
form; rank-only modes over Q and F_p exist both for speed and as
universal-coefficient cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .planar import Matching, circles
from .arcalg import ArcCombination, multiply, idempotent
from .tqft import mask_qdeg


@dataclass(frozen=True)
class ProjSummand:
    matching: Matching
    qshift: int

    def shifted(self, q: int) -> "ProjSummand":
        return ProjSummand(self.matching, self.qshift + q)

    def __repr__(self) -> str:
        return f"P[{self.matching}]{{{self.qshift}}}"


class ModuleMap:
    """Matrix of block elements between direct sums of projectives.

    entries[(r, c)] is an ArcCombination in block (source[c].matching,
    target[r].matching); absent keys are zero.
    """

    __slots__ = ("source", "target", "entries")

    def __init__(
        self,
        source: tuple[ProjSummand, ...],
        target: tuple[ProjSummand, ...],
        entries: dict[tuple[int, int], ArcCombination] | None = None,
    ):
        self.source = tuple(source)
        self.target = tuple(target)
        self.entries = {}
        for (r, c), g in (entries or {}).items():
            if not g:
                continue
            if g.source != self.source[c].matching or g.target != self.target[r].matching:
                raise ValueError(f"entry ({r},{c}) lies in the wrong block")
            self.entries[(r, c)] = g

    def is_q_homogeneous(self) -> bool:
        for (r, c), g in self.entries.items():
            n = g.source.n
            want = n + self.source[c].qshift - self.target[r].qshift
            if not g.is_homogeneous(want):
                return False
        return True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other (matrix product via the surgery product)."""
        if other.target != self.source:
            raise ValueError("compose: mismatched middles")
        acc: dict[tuple[int, int], ArcCombination] = {}
        by_col: dict[int, list[tuple[int, ArcCombination]]] = {}
        for (k, c), g in other.entries.items():
            by_col.setdefault(c, []).append((k, g))
        by_row: dict[int, list[tuple[int, ArcCombination]]] = {}
        for (r, k), f in self.entries.items():
            by_row.setdefault(k, []).append((r, f))
        for c, lows in by_col.items():
            for k, g in lows:
                for r, f in by_row.get(k, []):
                    term = multiply(f, g)
                    if not term:
                        continue
                    if (r, c) in acc:
                        acc[(r, c)] = acc[(r, c)] + term
                    else:
                        acc[(r, c)] = term
        return ModuleMap(other.source, self.target, acc)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("add: shape mismatch")
        entries = dict(self.entries)
        for rc, g in other.entries.items():
            entries[rc] = entries[rc] + g if rc in entries else g
        return ModuleMap(self.source, self.target, entries)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, {rc: -g for rc, g in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    @classmethod
    def identity(cls, summands: tuple[ProjSummand, ...]) -> "ModuleMap":
        return cls(summands, summands, {(k, k): idempotent(s.matching) for k, s in enumerate(summands)})

    @classmethod
    def zero_map(cls, source, target) -> "ModuleMap":
        return cls(tuple(source), tuple(target), {})


class Complex:
    """Bounded cochain complex of projective summands; d_h goes h -> h+1."""

    __slots__ = ("terms", "diffs")

    def __init__(
        self,
        terms: dict[int, tuple[ProjSummand, ...]],
        diffs: dict[int, ModuleMap],
        check: bool = True,
    ):
        self.terms = {h: tuple(t) for h, t in terms.items() if t}
        self.diffs = {}
        for h, d in diffs.items():
            if h in self.terms and h + 1 in self.terms and not d.is_zero():
                self.diffs[h] = d
        if check:
            self.validate()

    def validate(self):
        for h, d in self.diffs.items():
            if d.source != self.terms[h] or d.target != self.terms.get(h + 1, ()):
                raise ValueError(f"differential at {h} has wrong shape")
            if not d.is_q_homogeneous():
                raise ValueError(f"differential at {h} is not quantum-degree 0")
        for h in self.diffs:
            if h + 1 in self.diffs:
                if not self.diffs[h + 1].compose(self.diffs[h]).is_zero():
                    raise ValueError(f"d^2 != 0 between degrees {h} and {h+2}")

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def summands(self, h: int) -> tuple[ProjSummand, ...]:
        return self.terms.get(h, ())

    def differential(self, h: int) -> ModuleMap:
        if h in self.diffs:
            return self.diffs[h]
        return ModuleMap.zero_map(self.terms.get(h, ()), self.terms.get(h + 1, ()))

    def size(self) -> int:
        return sum(len(t) for t in self.terms.values())

    def shift_q(self, q: int) -> "Complex":
        """Raise every quantum shift by q; entries are unchanged."""
        terms = {h: tuple(s.shifted(q) for s in t) for h, t in self.terms.items()}
        diffs = {
            h: ModuleMap(terms[h], terms[h + 1], d.entries) for h, d in self.diffs.items()
        }
        return Complex(terms, diffs, check=False)

    def shift_h(self, k: int, flip_sign: bool = True) -> "Complex":
        """C[k]: degree h term becomes degree h-k; odd k flips d's sign."""
        terms = {h - k: t for h, t in self.terms.items()}
        sign = -1 if (k % 2 == 1 and flip_sign) else 1
        diffs = {}
        for h, d in self.diffs.items():
            diffs[h - k] = ModuleMap(d.source, d.target, {rc: sign * g for rc, g in d.entries.items()})
        return Complex(terms, diffs, check=False)

    @classmethod
    def single(cls, w: Matching, qshift: int = 0, degree: int = 0) -> "Complex":
        return cls({degree: (ProjSummand(w, qshift),)}, {}, check=False)


def is_chain_map(f: dict[int, ModuleMap], C: Complex, D: Complex) -> bool:
    """f_h: C_h -> D_h commuting with differentials."""
    for h in set(C.terms) | set(D.terms):
        fh = f.get(h)
        fh1 = f.get(h + 1)
        lhs = fh1.compose(C.differential(h)) if fh1 else None
        rhs = D.differential(h).compose(fh) if fh else None
        if lhs is None and rhs is None:
            continue
        if lhs is None:
            if not rhs.is_zero():
                return False
        elif rhs is None:
            if not lhs.is_zero():
                return False
        elif not (lhs + (-rhs)).is_zero():
            return False
    return True


def cone(f: dict[int, ModuleMap], C: Complex, D: Complex, check: bool = True) -> "Complex":
    """Mapping cone of a degree-0 chain map f: C -> D.

    Terms C^{h+1} (+) D^h, differential [[-d_C, 0], [f, d_D]].  Rejects
    non-chain-map input.
    """
    if check and not is_chain_map(f, C, D):
        raise ValueError("cone: f is not a chain map")
    degrees = set()
    for h in C.terms:
        degrees.add(h - 1)
    degrees.update(D.terms)
    terms: dict[int, tuple[ProjSummand, ...]] = {}
    for h in degrees:
        terms[h] = C.summands(h + 1) + D.summands(h)
    diffs: dict[int, ModuleMap] = {}
    for h in sorted(degrees):
        if h + 1 not in terms:
            continue
        nc = len(C.summands(h + 1))
        entries: dict[tuple[int, int], ArcCombination] = {}
        for (r, c), g in C.differential(h + 1).entries.items():
            entries[(r, c)] = -g
        for (r, c), g in f.get(h + 1, ModuleMap.zero_map(C.summands(h + 1), D.summands(h + 1))).entries.items():
            entries[(len(C.summands(h + 2)) + r, c)] = g
        for (r, c), g in D.differential(h).entries.items():
            entries[(len(C.summands(h + 2)) + r, nc + c)] = g
        dm = ModuleMap(terms[h], terms[h + 1], entries)
        diffs[h] = dm
    out = Complex(terms, diffs, check=check)
    return out


# ---------------------------------------------------------------------------
# Gaussian elimination of complexes


def _invertible_entry(g: ArcCombination, src: ProjSummand, tgt: ProjSummand) -> int | None:
    """+1/-1 when the entry is exactly (+/-) the idempotent, else None."""
    if src.matching != tgt.matching or src.qshift != tgt.qshift:
        return None
    if len(g.terms) != 1 or 0 not in g.terms:
        return None
    return g.terms[0] if g.terms[0] in (1, -1) else None


def eliminate(C: Complex) -> Complex:
    """Cancel isomorphism entries of the differential until none remain.

    Each cancellation removes a pair of summands and corrects the rest of
    the differential by the standard Gaussian elimination lemma; homology is
    unchanged.
    """
    terms = {h: list(t) for h, t in C.terms.items()}
    diffs: dict[int, dict[tuple[int, int], ArcCombination]] = {
        h: dict(d.entries) for h, d in C.diffs.items()
    }

    def find_pivot():
        for h, entries in diffs.items():
            for (r, c), g in entries.items():
                s = _invertible_entry(g, terms[h][c], terms[h + 1][r])
                if s is not None:
                    return h, r, c, s
        return None

    while True:
        piv = find_pivot()
        if piv is None:
            break
        h, pr, pc, s = piv
        entries = diffs[h]
        # correction: d[r,c] -= s * d[r,pc] . d[pr,c]
        gamma = {r: entries[(r, pc)] for (r, c) in entries if c == pc and r != pr}
        delta = {c: entries[(pr, c)] for (r, c) in entries if r == pr and c != pc}
        for r, g_r in gamma.items():
            for c, g_c in delta.items():
                corr = multiply(g_r, g_c)
                if not corr:
                    continue
                corr = (-s) * corr
                if (r, c) in entries:
                    new = entries[(r, c)] + corr
                    if new:
                        entries[(r, c)] = new
                    else:
                        del entries[(r, c)]
                else:
                    entries[(r, c)] = corr
        # drop the pivot pair and reindex
        for key in [k for k in entries if k[0] == pr or k[1] == pc]:
            del entries[key]
        below = diffs.get(h - 1, {})
        for key in [k for k in below if k[0] == pc]:
            del below[key]
        above = diffs.get(h + 1, {})
        for key in [k for k in above if k[1] == pr]:
            del above[key]

        def reindex(d: dict, row_drop: int | None, col_drop: int | None):
            out = {}
            for (r, c), g in d.items():
                nr = r - 1 if row_drop is not None and r > row_drop else r
                nc = c - 1 if col_drop is not None and c > col_drop else c
                out[(nr, nc)] = g
            return out

        diffs[h] = reindex(entries, pr, pc)
        if h - 1 in diffs:
            diffs[h - 1] = reindex(diffs[h - 1], pc, None)
        if h + 1 in diffs:
            diffs[h + 1] = reindex(diffs[h + 1], None, pr)
        del terms[h][pc]
        del terms[h + 1][pr]

    new_terms = {h: tuple(t) for h, t in terms.items() if t}
    new_diffs = {}
    for h, entries in diffs.items():
        if entries and h in new_terms and h + 1 in new_terms:
            new_diffs[h] = ModuleMap(new_terms[h], new_terms[h + 1], entries)
    return Complex(new_terms, new_diffs, check=False)


# ---------------------------------------------------------------------------
# idempotent truncation


class FreeComplex:
    """Cochain complex of free abelian groups with a (h, j) bigrading.

    basis[h] is a list of quantum degrees j, one per generator; mats[h] maps
    degree h to h+1 as {(row, col): int}.  Differentials preserve j.
    """

    def __init__(self, basis: dict[int, list[int]], mats: dict[int, dict[tuple[int, int], int]]):
        self.basis = {h: list(b) for h, b in basis.items() if b}
        self.mats = {h: dict(m) for h, m in mats.items() if m}

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def check_d2(self):
        for h, m in self.mats.items():
            nxt = self.mats.get(h + 1)
            if not nxt:
                continue
            by_col: dict[int, list[tuple[int, int]]] = {}
            for (r, c), v in nxt.items():
                by_col.setdefault(c, []).append((r, v))
            acc: dict[tuple[int, int], int] = {}
            for (k, c), v in m.items():
                for r, w in by_col.get(k, []):
                    acc[(r, c)] = acc.get((r, c), 0) + w * v
            if any(acc.values()):
                raise ValueError(f"d^2 != 0 in truncated complex at degree {h}")


def idempotent_truncate(a: Matching, C: Complex) -> FreeComplex:
    """Apply Hom(P_a, -): summand P_b{t} contributes the block (a, b) with
    quantum degrees qdeg + t; differentials act by the surgery product."""
    basis: dict[int, list[int]] = {}
    offsets: dict[int, list[int]] = {}
    masks_per: dict[int, list[int]] = {}
    for h, summands in C.terms.items():
        degs: list[int] = []
        offs: list[int] = []
        cs: list[int] = []
        for s in summands:
            offs.append(len(degs))
            c = circles(a, s.matching).c
            cs.append(c)
            for m in range(1 << c):
                degs.append(mask_qdeg(m, c) + s.qshift)
        basis[h] = degs
        offsets[h] = offs
        masks_per[h] = cs
    mats: dict[int, dict[tuple[int, int], int]] = {}
    for h, d in C.diffs.items():
        mat: dict[tuple[int, int], int] = {}
        for (r, c), g in d.entries.items():
            src_m = C.terms[h][c].matching
            c_src = masks_per[h][c]
            for m in range(1 << c_src):
                elem = ArcCombination(a, src_m, {m: 1})
                img = multiply(g, elem)
                col = offsets[h][c] + m
                for mm, coeff in img.terms.items():
                    row = offsets[h + 1][r] + mm
                    key = (row, col)
                    mat[key] = mat.get(key, 0) + coeff
        mats[h] = {k: v for k, v in mat.items() if v}
    out = FreeComplex(basis, mats)
    out.check_d2()
    return out


# ---------------------------------------------------------------------------
# integer linear algebra


def smith_diagonal(entries: dict[tuple[int, int], int]) -> list[int]:
    """Diagonal of an integer matrix under invertible row/col ops.

    Not forced into divisibility order; the cokernel torsion ⊕Z/d can be
    read off directly.  Pivots on ±1 entries first to limit coefficient
    growth.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in entries.items():
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)

    def set_entry(r: int, c: int, v: int):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
        else:
            row = rows.get(r)
            if row is not None and c in row:
                del row[c]
                if not row:
                    del rows[r]
                cs = cols[c]
                cs.discard(r)
                if not cs:
                    del cols[c]

    def row_sub(r: int, r0: int, q: int):
        for c2, v2 in list(rows[r0].items()):
            set_entry(r, c2, rows.get(r, {}).get(c2, 0) - q * v2)

    def col_sub(c: int, c0: int, q: int):
        for r2 in list(cols[c0]):
            set_entry(r2, c, rows[r2].get(c, 0) - q * rows[r2][c0])

    def swap_rows(r1: int, r2: int):
        touched = set(rows.get(r1, {})) | set(rows.get(r2, {}))
        rows[r1], rows[r2] = rows.pop(r2, {}), rows.pop(r1, {})
        for rr in (r1, r2):
            if rr in rows and not rows[rr]:
                del rows[rr]
        for c in touched:
            s = cols.setdefault(c, set())
            for rr in (r1, r2):
                if rr in rows and c in rows[rr]:
                    s.add(rr)
                else:
                    s.discard(rr)
            if not s:
                del cols[c]

    def swap_cols(c1: int, c2: int):
        for r in set(cols.get(c1, set())) | set(cols.get(c2, set())):
            row = rows[r]
            v1, v2 = row.get(c1), row.get(c2)
            for c, v in ((c1, v2), (c2, v1)):
                if v is None:
                    row.pop(c, None)
                else:
                    row[c] = v
        s1 = {r for r in cols.pop(c1, set())}
        s2 = {r for r in cols.pop(c2, set())}
        if s2:
            cols[c1] = s2
        if s1:
            cols[c2] = s1

    diag: list[int] = []
    while rows:
        pr = pc = None
        best = None
        for r, row in rows.items():
            for c, v in row.items():
                a = abs(v)
                if best is None or a < best:
                    pr, pc, best = r, c, a
                if a == 1:
                    break
            if best == 1:
                break
        while True:
            other_r = next((r for r in cols[pc] if r != pr), None)
            if other_r is not None:
                a = rows[pr][pc]
                b = rows[other_r][pc]
                row_sub(other_r, pr, b // a)
                if rows.get(other_r, {}).get(pc):
                    swap_rows(pr, other_r)  # strictly smaller pivot, Euclid
                continue
            other_c = next((c for c in rows[pr] if c != pc), None)
            if other_c is not None:
                a = rows[pr][pc]
                b = rows[pr][other_c]
                col_sub(other_c, pc, b // a)
                if rows[pr].get(other_c):
                    swap_cols(pc, other_c)
                continue
            break
        diag.append(abs(rows[pr][pc]))
        set_entry(pr, pc, 0)
    return diag


def rank_over_field(entries: dict[tuple[int, int], int], p: int | None = None) -> int:
    """Rank over Q (p None) or F_p by Gaussian elimination."""
    grouped: dict[int, dict[int, Fraction | int]] = {}
    for (r, c), v in entries.items():
        v = v % p if p is not None else Fraction(v)
        if v:
            grouped.setdefault(r, {})[c] = v
    rows = list(grouped.values())
    rank = 0
    while rows:
        row = rows.pop()
        if not row:
            continue
        pc, pv = next(iter(row.items()))
        rank += 1
        reduced = []
        for other in rows:
            if pc in other:
                f = (other[pc] * pow(pv, -1, p)) % p if p is not None else other[pc] / pv
                upd: dict[int, Fraction | int] = {}
                for c in set(other) | set(row):
                    v = other.get(c, 0) - f * row.get(c, 0)
                    if p is not None:
                        v %= p
                    if v:
                        upd[c] = v
                reduced.append(upd)
            else:
                reduced.append(other)
        rows = reduced
    return rank


def _prime_power_factors(d: int) -> list[int]:
    out = []
    k = 2
    while k * k <= d:
        if d % k == 0:
            q = 1
            while d % k == 0:
                d //= k
                q *= k
            out.append(q)
        k += 1
    if d > 1:
        out.append(d)
    return out


@dataclass
class BigradedGroup:
    """Ranks and torsion indexed by (homological i, quantum j)."""

    entries: dict[tuple[int, int], tuple[int, tuple[int, ...]]]

    def rank(self, i: int, j: int) -> int:
        return self.entries.get((i, j), (0, ()))[0]

    def torsion(self, i: int, j: int) -> tuple[int, ...]:
        return self.entries.get((i, j), (0, ()))[1]

    def total_rank(self) -> int:
        return sum(r for r, _t in self.entries.values())

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.entries)

    def shifted(self, di: int, dj: int) -> "BigradedGroup":
        return BigradedGroup({(i + di, j + dj): v for (i, j), v in self.entries.items()})

    def to_json(self) -> list[dict]:
        return [
            {"i": i, "j": j, "rank": r, "torsion": list(t)}
            for (i, j), (r, t) in sorted(self.entries.items())
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "BigradedGroup":
        return cls({(d["i"], d["j"]): (d["rank"], tuple(d["torsion"])) for d in data})

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedGroup) and self._norm() == other._norm()

    def _norm(self):
        return {
            k: (r, tuple(sorted(t)))
            for k, (r, t) in self.entries.items()
            if r or t
        }


def homology(T: FreeComplex, coefficients: str = "Z") -> BigradedGroup:
    """Homology of a free complex, per (i, j).

    coefficients: "Z" (ranks and torsion via Smith normal form), "Q", or
    "Fp" for a prime p (ranks only).
    """
    T.check_d2()
    p: int | None
    if coefficients == "Z" or coefficients == "Q":
        p = None
    elif coefficients.startswith("F"):
        p = int(coefficients[1:])
        if p < 2:
            raise ValueError(f"bad field {coefficients}")
    else:
        raise ValueError(f"unknown coefficients {coefficients!r}")

    # split every degree by quantum grading
    js = sorted({j for b in T.basis.values() for j in b})
    by_hj: dict[tuple[int, int], list[int]] = {}
    for h, b in T.basis.items():
        for idx, j in enumerate(b):
            by_hj.setdefault((h, j), []).append(idx)

    def restrict(h: int, j: int) -> dict[tuple[int, int], int]:
        mat = T.mats.get(h)
        if not mat:
            return {}
        src = {g: k for k, g in enumerate(by_hj.get((h, j), []))}
        tgt = {g: k for k, g in enumerate(by_hj.get((h + 1, j), []))}
        out = {}
        for (r, c), v in mat.items():
            if c in src:
                if r not in tgt:
                    raise ValueError("differential does not preserve quantum degree")
                out[(tgt[r], src[c])] = v
        return out

    result: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    hs = sorted(T.basis)
    for h in hs:
        for j in js:
            dim = len(by_hj.get((h, j), []))
            if dim == 0:
                continue
            d_out = restrict(h, j)
            d_in = restrict(h - 1, j)
            if coefficients == "Z":
                diag_in = smith_diagonal(d_in)
                r_in = len(diag_in)
                r_out = len(smith_diagonal(d_out))
                tors = []
                for dd in diag_in:
                    if dd > 1:
                        tors.extend(_prime_power_factors(dd))
                rank = dim - r_out - r_in
                if rank or tors:
                    result[(h, j)] = (rank, tuple(sorted(tors)))
            else:
                r_in = rank_over_field(d_in, p)
                r_out = rank_over_field(d_out, p)
                rank = dim - r_out - r_in
                if rank:
                    result[(h, j)] = (rank, ())
    return BigradedGroup(result)
