"""Exact arithmetic for finite abelian groups presented as products of cyclic
groups, and set-level operations on their subsets.

Elements are residue tuples; subsets carry a bit vector indexed by the
mixed-radix element index (first factor slowest, matching C order).  All
densities, energies and counts are exact: integers or `fractions.Fraction`.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._scan import Scanner
from .errors import CapExceeded, GroupMismatchError, ParseError

DEFAULT_MAX_ORDER = 2**20
MAX_ORDER_ENV = "ADDFORMS_MAX_ORDER"

# Row cap for temporary pairwise tables (sumset, representation counts).
_CHUNK = 1 << 21


def max_order_cap(explicit: int | None = None) -> int:
    """Group-order cap: explicit argument wins over the environment variable."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(MAX_ORDER_ENV)
    if env is not None and env.strip():
        return int(env)
    return DEFAULT_MAX_ORDER


class FiniteAbelianGroup:
    """Direct product of cyclic groups Z_{n_1} x ... x Z_{n_m}.

    The index <-> residue-tuple bijection is mixed radix with the first
    factor slowest.  Instances are immutable and safe to share.
    """

    __slots__ = ("moduli", "order", "_strides", "_res_tables")

    def __init__(self, moduli: Sequence[int], max_order: int | None = None):
        mods = tuple(int(n) for n in moduli)
        if any(n < 1 for n in mods):
            raise ValueError(f"cyclic factors must be >= 1, got {mods}")
        order = 1
        for n in mods:
            order *= n
        cap = max_order_cap(max_order)
        if order > cap:
            raise CapExceeded(
                f"group order {order} exceeds cap {cap}; pass max_order or set "
                f"{MAX_ORDER_ENV} to override"
            )
        strides = [1] * len(mods)
        for t in range(len(mods) - 2, -1, -1):
            strides[t] = strides[t + 1] * mods[t + 1]
        object.__setattr__(self, "moduli", mods)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_strides", tuple(strides))
        object.__setattr__(self, "_res_tables", {})

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("FiniteAbelianGroup is immutable")

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def element(self, residues: Sequence[int]) -> "GroupElement":
        if len(residues) != len(self.moduli):
            raise ValueError(
                f"expected {len(self.moduli)} residues, got {len(residues)}"
            )
        reduced = tuple(int(r) % n for r, n in zip(residues, self.moduli))
        return GroupElement(self, reduced)

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.moduli))

    def index_of(self, residues: Sequence[int]) -> int:
        return sum(
            (int(r) % n) * s for r, n, s in zip(residues, self.moduli, self._strides)
        )

    def from_index(self, index: int) -> "GroupElement":
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for order {self.order}")
        residues = []
        for n, s in zip(self.moduli, self._strides):
            residues.append((index // s) % n)
        return GroupElement(self, tuple(residues))

    def __iter__(self) -> Iterator["GroupElement"]:
        for i in range(self.order):
            yield self.from_index(i)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(self.moduli)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.moduli)})"

    def literal(self) -> str:
        """Text form accepted by `parse_group`, e.g. "Z9xZ2"."""
        if not self.moduli:
            return "Z1"
        return "x".join(f"Z{n}" for n in self.moduli)

    # Vectorized index helpers used throughout the package.

    def residue_table(self, t: int) -> np.ndarray:
        """int64 array: residue of each element index in component t."""
        table = self._res_tables.get(t)
        if table is None:
            idx = np.arange(self.order, dtype=np.int64)
            table = (idx // self._strides[t]) % self.moduli[t]
            table.flags.writeable = False
            self._res_tables[t] = table
        return table

    def encode_columns(self, columns: Sequence[np.ndarray]) -> np.ndarray:
        """Flat indices from per-component residue arrays (already reduced)."""
        if not self.moduli:
            shape = columns[0].shape if columns else (1,)
            return np.zeros(shape, dtype=np.int64)
        out = columns[0] * self._strides[0]
        for t in range(1, len(self.moduli)):
            out = out + columns[t] * self._strides[t]
        return out

    def translate_indices(self, indices: np.ndarray, by: "GroupElement") -> np.ndarray:
        cols = [
            (self.residue_table(t)[indices] + by.residues[t]) % n
            for t, n in enumerate(self.moduli)
        ]
        return self.encode_columns(cols) if cols else np.zeros_like(indices)

    def negate_indices(self, indices: np.ndarray) -> np.ndarray:
        cols = [
            (-self.residue_table(t)[indices]) % n for t, n in enumerate(self.moduli)
        ]
        return self.encode_columns(cols) if cols else np.zeros_like(indices)


class GroupElement:
    """An element of a FiniteAbelianGroup, stored as a reduced residue tuple."""

    __slots__ = ("group", "residues")

    def __init__(self, group: FiniteAbelianGroup, residues: tuple[int, ...]):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "residues", residues)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("GroupElement is immutable")

    def index(self) -> int:
        return self.group.index_of(self.residues)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return element_add(self, other)

    def __neg__(self) -> "GroupElement":
        return element_scale(-1, self)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return element_add(self, -other)

    def __rmul__(self, c: int) -> "GroupElement":
        return element_scale(c, self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.group == other.group
            and self.residues == other.residues
        )

    def __hash__(self) -> int:
        return hash((self.group.moduli, self.residues))

    def __repr__(self) -> str:
        return f"GroupElement{self.residues}"


def _same_group(*objs) -> FiniteAbelianGroup:
    group = objs[0].group
    for o in objs[1:]:
        if o.group != group:
            raise GroupMismatchError(
                f"operands live in different groups: {group.literal()} vs "
                f"{o.group.literal()}"
            )
    return group


def element_add(a: GroupElement, b: GroupElement) -> GroupElement:
    """Componentwise (a + b) mod n_t."""
    group = _same_group(a, b)
    return GroupElement(
        group,
        tuple((x + y) % n for x, y, n in zip(a.residues, b.residues, group.moduli)),
    )


def element_scale(c: int, a: GroupElement) -> GroupElement:
    """Integer multiple c*a, reduced per component; negatives allowed."""
    return GroupElement(
        a.group, tuple((c * x) % n for x, n in zip(a.residues, a.group.moduli))
    )


class GroupSubset:
    """A subset A of a group with bit-vector membership and cached size.

    Immutable after construction; use the classmethods to build one.
    """

    __slots__ = ("group", "bits", "size", "_indices")

    def __init__(self, group: FiniteAbelianGroup, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (group.order,):
            raise ValueError(f"bit vector must have length {group.order}")
        bits = bits.copy()
        bits.flags.writeable = False
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "size", int(bits.sum()))
        object.__setattr__(self, "_indices", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("GroupSubset is immutable")

    @classmethod
    def empty(cls, group: FiniteAbelianGroup) -> "GroupSubset":
        return cls(group, np.zeros(group.order, dtype=bool))

    @classmethod
    def full(cls, group: FiniteAbelianGroup) -> "GroupSubset":
        return cls(group, np.ones(group.order, dtype=bool))

    @classmethod
    def from_indices(
        cls, group: FiniteAbelianGroup, indices: Iterable[int]
    ) -> "GroupSubset":
        bits = np.zeros(group.order, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64, count=-1)
        if idx.size:
            if idx.min() < 0 or idx.max() >= group.order:
                raise ValueError("subset index out of range")
            bits[idx] = True
        return cls(group, bits)

    @classmethod
    def from_elements(
        cls, group: FiniteAbelianGroup, elements: Iterable[GroupElement]
    ) -> "GroupSubset":
        idx = []
        for e in elements:
            if e.group != group:
                raise GroupMismatchError("element from a different group")
            idx.append(e.index())
        return cls.from_indices(group, idx)

    @classmethod
    def from_residues(
        cls, group: FiniteAbelianGroup, tuples: Iterable[Sequence[int]]
    ) -> "GroupSubset":
        return cls.from_indices(group, (group.index_of(r) for r in tuples))

    def indices(self) -> np.ndarray:
        cached = self._indices
        if cached is None:
            cached = np.nonzero(self.bits)[0].astype(np.int64)
            cached.flags.writeable = False
            object.__setattr__(self, "_indices", cached)
        return cached

    def elements(self) -> list[GroupElement]:
        return [self.group.from_index(int(i)) for i in self.indices()]

    def residue_lists(self) -> list[list[int]]:
        return [list(e.residues) for e in self.elements()]

    def density(self) -> Fraction:
        return Fraction(self.size, self.group.order)

    def contains(self, element: GroupElement) -> bool:
        if element.group != self.group:
            raise GroupMismatchError("membership test across groups")
        return bool(self.bits[element.index()])

    __contains__ = contains

    def translate(self, by: GroupElement) -> "GroupSubset":
        """The translate A + by."""
        if by.group != self.group:
            raise GroupMismatchError("translate by element of a different group")
        bits = np.zeros(self.group.order, dtype=bool)
        idx = self.indices()
        if idx.size:
            bits[self.group.translate_indices(idx, by)] = True
        return GroupSubset(self.group, bits)

    def negate(self) -> "GroupSubset":
        """The reflection -A."""
        bits = np.zeros(self.group.order, dtype=bool)
        idx = self.indices()
        if idx.size:
            bits[self.group.negate_indices(idx)] = True
        return GroupSubset(self.group, bits)

    def __and__(self, other: "GroupSubset") -> "GroupSubset":
        _same_group(self, other)
        return GroupSubset(self.group, self.bits & other.bits)

    def __or__(self, other: "GroupSubset") -> "GroupSubset":
        _same_group(self, other)
        return GroupSubset(self.group, self.bits | other.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupSubset)
            and self.group == other.group
            and bool(np.array_equal(self.bits, other.bits))
        )

    def __repr__(self) -> str:
        return f"GroupSubset({self.group.literal()}, size={self.size})"


def _pair_sum_indices(group: FiniteAbelianGroup, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Flat indices of all pairwise sums rows[i] + cols[j], shape (len(rows), len(cols))."""
    if not group.moduli:
        return np.zeros((len(rows), len(cols)), dtype=np.int64)
    acc = None
    for t, n in enumerate(group.moduli):
        rt = group.residue_table(t)
        comp = (rt[rows][:, None] + rt[cols][None, :]) % n
        comp *= group._strides[t]
        acc = comp if acc is None else acc + comp
    return acc


def sumset(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    """A + B = {x + y : x in A, y in B}; empty if either side is empty."""
    group = _same_group(a, b)
    if a.size == 0 or b.size == 0:
        return GroupSubset.empty(group)
    ia, ib = a.indices(), b.indices()
    if ia.size > ib.size:
        ia, ib = ib, ia
    bits = np.zeros(group.order, dtype=bool)
    step = max(1, _CHUNK // ib.size)
    for s in range(0, ia.size, step):
        flat = _pair_sum_indices(group, ia[s : s + step], ib)
        bits[flat.ravel()] = True
    return GroupSubset(group, bits)


def signed_iterated_sumset(b: GroupSubset, r: int, s: int) -> GroupSubset:
    """r-fold sum of B minus s-fold sum of B (B + ... + B - B - ... - B)."""
    if r < 0 or s < 0:
        raise ValueError("fold counts must be nonnegative")
    if r + s < 1:
        raise ValueError("need r + s >= 1")
    acc = GroupSubset.from_indices(b.group, [0])
    for _ in range(r):
        acc = sumset(acc, b)
    if s:
        neg = b.negate()
        for _ in range(s):
            acc = sumset(acc, neg)
    return acc


def stabilizer(s: GroupSubset) -> GroupSubset:
    """{g : g + S = S}; a subgroup.  Defined as the full group for S empty or S = G."""
    group = s.group
    if s.size == 0 or s.size == group.order:
        return GroupSubset.full(group)
    idx = s.indices()
    base = group.from_index(int(idx[0]))
    candidates = group.translate_indices(idx, -base)
    bits = np.zeros(group.order, dtype=bool)
    for c in candidates:
        shifted = group.translate_indices(idx, group.from_index(int(c)))
        if s.bits[shifted].all():
            bits[c] = True
    return GroupSubset(group, bits)


def representation_vector(a: GroupSubset) -> np.ndarray:
    """int64 array over element indices: r_A(x) = #{(a1,a2) in A^2 : a1+a2 = x}."""
    group = a.group
    vec = np.zeros(group.order, dtype=np.int64)
    ia = a.indices()
    if ia.size == 0:
        return vec
    step = max(1, _CHUNK // ia.size)
    for s in range(0, ia.size, step):
        flat = _pair_sum_indices(group, ia[s : s + step], ia)
        vec += np.bincount(flat.ravel(), minlength=group.order)
    return vec


def representation_counts(a: GroupSubset) -> dict[GroupElement, int]:
    """r_A(x) for every x in the group; values sum to |A|^2."""
    vec = representation_vector(a)
    return {a.group.from_index(i): int(vec[i]) for i in range(a.group.order)}


def additive_energy_raw(a: GroupSubset) -> int:
    """Number of quadruples (a1,a2,a3,a4) in A^4 with a1 + a2 = a3 + a4."""
    vec = representation_vector(a)
    return int((vec * vec).sum())


def additive_energy(a: GroupSubset) -> Fraction:
    """Normalized additive energy: raw count / |G|^3, exact."""
    return Fraction(additive_energy_raw(a), a.group.order**3)


def doubling_constant(a: GroupSubset) -> Fraction:
    """|A + A| / |A| for nonempty A."""
    if a.size == 0:
        raise ValueError("doubling constant of the empty set is undefined")
    return Fraction(sumset(a, a).size, a.size)


# Text formats.


def parse_group(text: str, max_order: int | None = None) -> FiniteAbelianGroup:
    """Parse a group literal: "Z" int ("x" "Z" int)*, e.g. "Z9 x Z2"."""
    sc = Scanner(text)
    moduli = []
    while True:
        if not (sc.match("Z") or sc.match("z")):
            raise sc.error("expected 'Z'")
        pos = sc.pos
        n = sc.expect_int("modulus")
        if n < 1:
            raise sc.error("modulus must be >= 1", pos)
        moduli.append(n)
        if sc.eof():
            break
        if not (sc.match("x") or sc.match("X")):
            raise sc.error("expected 'x' between factors")
    return FiniteAbelianGroup(moduli, max_order=max_order)


def format_group(group: FiniteAbelianGroup) -> str:
    return group.literal()


def _parse_element_item(sc: Scanner, group: FiniteAbelianGroup) -> GroupElement:
    if sc.match("("):
        residues = [_parse_signed_int(sc)]
        while sc.match(","):
            residues.append(_parse_signed_int(sc))
        sc.expect(")")
    else:
        residues = [_parse_signed_int(sc)]
    if len(residues) != group.rank:
        raise sc.error(
            f"element has {len(residues)} residues, group has rank {group.rank}"
        )
    return group.element(residues)


def _parse_signed_int(sc: Scanner) -> int:
    sign = -1 if sc.match("-") else 1
    return sign * sc.expect_int()


def parse_subset(text: str, group: FiniteAbelianGroup) -> GroupSubset:
    """Parse an inline subset literal like "{0, 2}" or "{(0,1), (1,0)}"."""
    sc = Scanner(text)
    sc.expect("{")
    elements: list[GroupElement] = []
    if not sc.match("}"):
        elements.append(_parse_element_item(sc, group))
        while sc.match(","):
            elements.append(_parse_element_item(sc, group))
        sc.expect("}")
    sc.expect_eof()
    return GroupSubset.from_elements(group, elements)


def format_subset(subset: GroupSubset) -> str:
    if subset.group.rank == 1:
        items = [str(e.residues[0]) for e in subset.elements()]
    else:
        items = ["(" + ",".join(map(str, e.residues)) + ")" for e in subset.elements()]
    return "{" + ", ".join(items) + "}"


def subset_to_lines(subset: GroupSubset) -> str:
    """File form: one element per line, comma-separated residues, '#' comments."""
    lines = [f"# subset of {subset.group.literal()}, size {subset.size}"]
    lines.extend(",".join(map(str, e.residues)) for e in subset.elements())
    return "\n".join(lines) + "\n"


def subset_to_json(subset: GroupSubset) -> str:
    return json.dumps(subset.residue_lists())


def parse_subset_file(text: str, group: FiniteAbelianGroup) -> GroupSubset:
    """Parse subset file content: line format, or a JSON array of residue arrays."""
    stripped = text.lstrip()
    if stripped.startswith("["):
        rows = json.loads(text)
        return GroupSubset.from_residues(
            group, [[int(v) for v in row] for row in rows]
        )
    tuples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            residues = [int(p.strip()) for p in line.split(",")]
        except ValueError:
            raise ParseError("malformed residue line", lineno, 1) from None
        if len(residues) != group.rank:
            raise ParseError(
                f"element has {len(residues)} residues, group has rank {group.rank}",
                lineno,
                1,
            )
        tuples.append(residues)
    return GroupSubset.from_residues(group, tuples)
