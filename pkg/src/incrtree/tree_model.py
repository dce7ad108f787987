"""Increasing trees, alternating sequences and permutations, text formats.

Trees are immutable :class:`IncreasingTree` nodes.  All traversals are
iterative so that tall trees do not hit the interpreter recursion limit.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import AmbiguousOrder, DomainError, SizeTooLarge
from .exactnum import RealInterval

__all__ = [
    "IncreasingTree",
    "AltSequence",
    "AltPermutation",
    "build_tree",
    "perm_from_sequence",
    "tree_from_permutation",
    "tree_from_sequence",
    "inorder_labels",
    "validate",
    "strip_decorations",
    "enumerate_strict_trees",
    "iter_strict_trees",
    "enumerate_family_trees",
    "alternating_permutations",
    "encode",
    "decode",
    "canonical_key",
    "STRICT_ENUM_MAX",
    "FAMILY_ENUM_MAX",
]

STRICT_ENUM_MAX = 13
FAMILY_ENUM_MAX = 8


@dataclass(frozen=True, eq=False, repr=False)
class IncreasingTree:
    """A node labelled ``label`` with 0, 1 or 2 ordered children.

    Equality, hashing and ``repr`` go through the paren encoding, which is
    computed without recursion, so very deep trees are safe.
    """

    label: int
    children: Tuple["IncreasingTree", ...] = ()
    decoration: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) > 2:
            raise ValueError("a node has at most two children")
        for ch in self.children:
            if ch.label <= self.label:
                raise ValueError(
                    f"child label {ch.label} does not exceed parent label {self.label}")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def nodes(self) -> Iterator["IncreasingTree"]:
        """Pre-order iteration over all nodes."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    @property
    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def arity_counts(self) -> Tuple[int, int, int]:
        """Numbers of (leaves, unary nodes, binary nodes)."""
        c = [0, 0, 0]
        for node in self.nodes():
            c[len(node.children)] += 1
        return c[0], c[1], c[2]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncreasingTree):
            return NotImplemented
        return self is other or _paren(self) == _paren(other)

    def __hash__(self) -> int:
        return hash(_paren(self))

    def __repr__(self) -> str:
        return f"IncreasingTree({_paren(self)!r})"

    def __str__(self) -> str:
        return encode(self, "paren")


def build_tree(labels: Sequence[int], kids: Sequence[Sequence[int]],
               decorations: Optional[Sequence[Optional[int]]] = None,
               root: int = 0) -> IncreasingTree:
    """Assemble nodes from flat arrays (``kids[i]`` lists child indices of node ``i``)."""
    built: List[Optional[IncreasingTree]] = [None] * len(labels)
    stack = [(root, False)]
    while stack:
        i, ready = stack.pop()
        if ready:
            built[i] = IncreasingTree(
                labels[i], tuple(built[c] for c in kids[i]),
                decorations[i] if decorations is not None else None)
        else:
            stack.append((i, True))
            stack.extend((c, False) for c in kids[i])
    return built[root]


def validate(tree: IncreasingTree, strict: bool = False) -> IncreasingTree:
    """Check the global invariants: labels are exactly ``1..n``; strict => arities 0/2."""
    labels = []
    for node in tree.nodes():
        labels.append(node.label)
        if strict and len(node.children) == 1:
            raise ValueError("strict binary trees have no unary nodes")
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise ValueError("labels must be exactly 1..n")
    return tree


def strip_decorations(tree: IncreasingTree) -> IncreasingTree:
    labels, kids = [], []
    index = {}
    order = list(tree.nodes())
    for i, node in enumerate(order):
        index[id(node)] = i
        labels.append(node.label)
    for node in order:
        kids.append([index[id(c)] for c in node.children])
    return build_tree(labels, kids)


def inorder_labels(tree: IncreasingTree) -> List[int]:
    """Labels in symmetric order; for binary trees this is the associated permutation.

    A unary node is emitted before its child.
    """
    out = []
    stack: List[Tuple[IncreasingTree, bool]] = [(tree, False)]
    while stack:
        node, visited = stack.pop()
        if visited or not node.children:
            out.append(node.label)
            continue
        if len(node.children) == 1:
            stack.append((node.children[0], False))
            stack.append((node, True))
        else:
            left, right = node.children
            stack.append((right, False))
            stack.append((node, True))
            stack.append((left, False))
    return out


# ---------------------------------------------------------------------------
# sequences and permutations
# ---------------------------------------------------------------------------

def _is_down_up(values: Sequence) -> bool:
    return all((values[i] > values[i + 1]) if i % 2 == 0 else (values[i] < values[i + 1])
               for i in range(len(values) - 1))


@dataclass(frozen=True)
class AltPermutation:
    """Down-up permutation ``perm[0] > perm[1] < perm[2] > ...`` of ``1..n``."""

    perm: Tuple[int, ...]

    def __post_init__(self):
        perm = tuple(self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError("not a permutation of 1..n")
        if not _is_down_up(perm):
            raise ValueError("permutation does not alternate down-up")

    def __len__(self):
        return len(self.perm)


@dataclass(frozen=True)
class AltSequence:
    """Alternating reals known through enclosing intervals.

    Value ``i`` lies in ``[lows[i] / 2**bits, highs[i] / 2**bits]``; ``lows``
    and ``highs`` may be ints or Fractions.  The enclosures must be pairwise
    disjoint for the rank order to be known.
    """

    lows: Tuple
    highs: Tuple
    bits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lows", tuple(self.lows))
        object.__setattr__(self, "highs", tuple(self.highs))
        if len(self.lows) != len(self.highs):
            raise ValueError("lows and highs differ in length")
        if any(a > b for a, b in zip(self.lows, self.highs)):
            raise ValueError("empty enclosure")

    @classmethod
    def from_values(cls, values: Sequence) -> "AltSequence":
        vals = tuple(Fraction(v) for v in values)
        return cls(vals, vals, 0)

    @classmethod
    def from_intervals(cls, intervals: Sequence[RealInterval]) -> "AltSequence":
        return cls(tuple(iv.lo for iv in intervals), tuple(iv.hi for iv in intervals), 0)

    @property
    def intervals(self) -> Tuple[RealInterval, ...]:
        d = 1 << self.bits
        return tuple(RealInterval(Fraction(a) / d, Fraction(b) / d)
                     for a, b in zip(self.lows, self.highs))

    @property
    def values(self) -> Tuple[Fraction, ...]:
        """Midpoints of the enclosures."""
        d = 2 << self.bits
        return tuple(Fraction(a + b) / d for a, b in zip(self.lows, self.highs))

    def ranks(self) -> List[int]:
        return _ranks(self.lows, self.highs)

    def __len__(self):
        return len(self.lows)


def _ranks(lows: Sequence, highs: Sequence) -> List[int]:
    order = sorted(range(len(lows)), key=lows.__getitem__)
    for a, b in zip(order, order[1:]):
        if not highs[a] < lows[b]:
            raise AmbiguousOrder(f"values at positions {a} and {b} are not separated")
    ranks = [0] * len(lows)
    for r, i in enumerate(order, 1):
        ranks[i] = r
    return ranks


def perm_from_sequence(seq: AltSequence) -> AltPermutation:
    """Rank permutation (1 = smallest) of an alternating sequence."""
    return AltPermutation(tuple(seq.ranks()))


def tree_from_permutation(perm: Sequence[int]) -> IncreasingTree:
    """Min-rooted decomposition: the minimum is the root, left/right parts recurse.

    Built with the linear-time stack construction of a Cartesian tree.
    """
    n = len(perm)
    if n == 0:
        raise ValueError("empty permutation")
    left = [-1] * n
    right = [-1] * n
    stack: List[int] = []
    for i, v in enumerate(perm):
        last = -1
        while stack and perm[stack[-1]] > v:
            last = stack.pop()
        left[i] = last
        if stack:
            right[stack[-1]] = i
        stack.append(i)
    kids = [[c for c in (left[i], right[i]) if c >= 0] for i in range(n)]
    return build_tree(list(perm), kids, root=stack[0])


def tree_from_sequence(seq: AltSequence) -> IncreasingTree:
    """Increasing tree of a sequence: the minimum's position becomes the root
    (label 1 = global rank), the parts left and right of it build the subtrees."""
    return tree_from_permutation(seq.ranks())


def alternating_permutations(n: int) -> Iterator[Tuple[int, ...]]:
    """All down-up permutations of ``1..n`` by brute force (test oracle)."""
    for p in itertools.permutations(range(1, n + 1)):
        if _is_down_up(p):
            yield p


# ---------------------------------------------------------------------------
# enumeration oracles
# ---------------------------------------------------------------------------

def _strict_shapes(labels: Tuple[int, ...]) -> Iterator[IncreasingTree]:
    root, rest = labels[0], labels[1:]
    if not rest:
        yield IncreasingTree(root)
        return
    m = len(rest)
    for k in range(1, m, 2):
        for left_labels in itertools.combinations(rest, k):
            chosen = set(left_labels)
            right_labels = tuple(x for x in rest if x not in chosen)
            for lt in _strict_shapes(left_labels):
                for rt in _strict_shapes(right_labels):
                    yield IncreasingTree(root, (lt, rt))


def iter_strict_trees(n: int) -> Iterator[IncreasingTree]:
    if n < 1 or n % 2 == 0:
        raise ValueError("strict binary trees need odd n >= 1")
    if n > STRICT_ENUM_MAX:
        raise SizeTooLarge(f"enumeration is limited to n <= {STRICT_ENUM_MAX}")
    return _strict_shapes(tuple(range(1, n + 1)))


def enumerate_strict_trees(n: int) -> List[IncreasingTree]:
    """All ``t_n`` strictly increasing binary trees of odd size ``n``."""
    return list(iter_strict_trees(n))


def _family_shapes(labels: Tuple[int, ...], a: int, b: int, c: int):
    root, rest = labels[0], labels[1:]
    if not rest:
        if c:
            yield IncreasingTree(root), c
        return
    if b:
        for sub, w in _family_shapes(rest, a, b, c):
            yield IncreasingTree(root, (sub,)), b * w
    if a:
        m = len(rest)
        for k in range(1, m):
            for left_labels in itertools.combinations(rest, k):
                chosen = set(left_labels)
                right_labels = tuple(x for x in rest if x not in chosen)
                for lt, wl in _family_shapes(left_labels, a, b, c):
                    for rt, wr in _family_shapes(right_labels, a, b, c):
                        yield IncreasingTree(root, (lt, rt)), a * wl * wr


def enumerate_family_trees(a, b, c, n: int) -> List[Tuple[IncreasingTree, int]]:
    """Every unary-binary increasing tree of size ``n`` with its weight
    ``a**#binary * b**#unary * c**#leaves`` (zero-weight trees omitted)."""
    weights = [Fraction(w) for w in (a, b, c)]
    if any(w.denominator != 1 or w < 0 for w in weights):
        raise DomainError("enumeration needs non-negative integer weights")
    if n < 1:
        raise ValueError("n must be positive")
    if n > FAMILY_ENUM_MAX:
        raise SizeTooLarge(f"family enumeration is limited to n <= {FAMILY_ENUM_MAX}")
    a, b, c = (int(w) for w in weights)
    return list(_family_shapes(tuple(range(1, n + 1)), a, b, c))


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def _paren(tree: IncreasingTree) -> str:
    out: List[str] = []
    stack: List[object] = [tree]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        node = item
        out.append(str(node.label))
        if node.decoration is not None:
            out.append(f":{node.decoration}")
        if node.children:
            stack.append(")")
            for i, ch in enumerate(reversed(node.children)):
                stack.append(ch)
                if i < len(node.children) - 1:
                    stack.append(",")
            stack.append("(")
    return "".join(out)


def _to_json_obj(tree: IncreasingTree) -> dict:
    objs = {}
    order = list(tree.nodes())
    for node in reversed(order):
        d = {"label": node.label}
        if node.decoration is not None:
            d["decoration"] = node.decoration
        d["children"] = [objs[id(c)] for c in node.children]
        objs[id(node)] = d
    return objs[id(tree)]


def _dot(tree: IncreasingTree) -> str:
    lines = ["digraph tree {"]
    for node in tree.nodes():
        text = str(node.label) if node.decoration is None else f"{node.label}:{node.decoration}"
        lines.append(f'  n{node.label} [label="{text}"];')
    for node in tree.nodes():
        for ch in node.children:
            lines.append(f"  n{node.label} -> n{ch.label};")
    lines.append("}")
    return "\n".join(lines)


def encode(tree: IncreasingTree, fmt: str = "paren") -> str:
    """Serialise as ``paren`` (``1(3,2)``, ``2:1`` marks decoration 1), ``json`` or ``dot``."""
    if fmt == "paren":
        return _paren(tree)
    if fmt == "json":
        return json.dumps(_to_json_obj(tree), separators=(",", ":"))
    if fmt == "dot":
        return _dot(tree)
    raise ValueError(f"unknown format {fmt!r}")


def _parse_paren(text: str) -> IncreasingTree:
    labels: List[int] = []
    decos: List[Optional[int]] = []
    kids: List[List[int]] = []
    stack: List[int] = []
    pos = 0
    n = len(text)

    def number() -> int:
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"expected a number at offset {start} in {text!r}")
        return int(text[start:pos])

    expect_node = True
    while pos < n:
        if expect_node:
            idx = len(labels)
            labels.append(number())
            deco = None
            if pos < n and text[pos] == ":":
                pos += 1
                deco = number()
            decos.append(deco)
            kids.append([])
            if stack:
                kids[stack[-1]].append(idx)
            if pos < n and text[pos] == "(":
                pos += 1
                stack.append(idx)
                expect_node = True
            else:
                expect_node = False
            continue
        ch = text[pos]
        pos += 1
        if ch == "," and stack:
            expect_node = True
        elif ch == ")" and stack:
            stack.pop()
        else:
            raise ValueError(f"unexpected {ch!r} at offset {pos - 1} in {text!r}")
    if stack or expect_node or not labels:
        raise ValueError(f"truncated tree text {text!r}")
    return build_tree(labels, kids, decos)


def _from_json_obj(obj: dict) -> IncreasingTree:
    labels, decos, kids = [], [], []
    stack = [(obj, -1)]
    while stack:
        d, parent = stack.pop()
        idx = len(labels)
        labels.append(int(d["label"]))
        decos.append(d.get("decoration"))
        kids.append([])
        if parent >= 0:
            kids[parent].append(idx)
        stack.extend((c, idx) for c in reversed(d.get("children", [])))
    return build_tree(labels, kids, decos)


def decode(text: str, fmt: str = "paren") -> IncreasingTree:
    if fmt == "paren":
        return _parse_paren(text.strip())
    if fmt == "json":
        return _from_json_obj(json.loads(text))
    raise ValueError(f"cannot decode format {fmt!r}")


def canonical_key(tree: IncreasingTree) -> str:
    """Injective text key (the paren encoding) for histogramming."""
    return _paren(tree)
