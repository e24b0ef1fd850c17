"""Words in a free group, endomorphisms, folding, and the Sanov embedding.

Words are stored as freely reduced sequences of signed generator indices
(+i for the i-th generator, -i for its inverse).  Injectivity of an
endomorphism is decided through Stallings folding: the images generate a
free subgroup whose rank is read off the folded core graph, and k elements
generating a rank-k subgroup of a free group are a free basis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

DEFAULT_WORD_BUDGET = 10**6

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_INDEXED_RE = re.compile(r"^(?:[xX][0-9]+)+$")
_INDEXED_TOKEN = re.compile(r"[xX][0-9]+")


class WordError(ValueError):
    """Bad word syntax, rank mismatch, or growth-budget violation."""


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class Word:
    """Freely reduced word in the free group of the given rank."""

    __slots__ = ("rank", "letters")

    def __init__(self, letters: Iterable[int], rank: int):
        reduced = _reduce(letters)
        for x in reduced:
            if x == 0 or abs(x) > rank:
                raise WordError(f"letter {x} out of range for rank {rank}")
        self.rank = rank
        self.letters = reduced

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def parse(cls, text: str, rank: int) -> "Word":
        """Parse `abA` letter form or `x1x2X1` indexed form; empty = identity."""
        text = text.strip()
        if not text:
            return cls.identity(rank)
        letters: list[int] = []
        if _INDEXED_RE.match(text):
            for token in _INDEXED_TOKEN.findall(text):
                idx = int(token[1:])
                if not 1 <= idx <= rank:
                    raise WordError(f"generator index {idx} exceeds rank {rank}")
                letters.append(idx if token[0] == "x" else -idx)
        else:
            for ch in text:
                lower = ch.lower()
                if lower not in _LETTERS:
                    raise WordError(f"unknown generator character {ch!r}")
                idx = _LETTERS.index(lower) + 1
                if idx > rank:
                    raise WordError(f"generator {ch!r} exceeds rank {rank}")
                letters.append(idx if ch.islower() else -idx)
        return cls(letters, rank)

    def to_text(self) -> str:
        if self.rank <= 26:
            out = []
            for x in self.letters:
                ch = _LETTERS[abs(x) - 1]
                out.append(ch if x > 0 else ch.upper())
            return "".join(out)
        return "".join((f"x{x}" if x > 0 else f"X{-x}") for x in self.letters)

    def _check(self, other: "Word") -> None:
        if self.rank != other.rank:
            raise WordError("words have different ranks")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.letters + other.letters, self.rank)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.rank)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word.identity(self.rank)
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.rank == other.rank and self.letters == other.letters

    def __hash__(self) -> int:
        return hash((self.rank, self.letters))

    def __repr__(self) -> str:
        return f"Word({self.to_text()!r}, rank={self.rank})"


def word_multiply(u: Word, v: Word) -> Word:
    return u * v


def word_invert(w: Word) -> Word:
    return w.inverse()


def free_reduce(letters: Iterable[int], rank: int) -> Word:
    """Freely reduce a raw letter sequence into a Word."""
    return Word(letters, rank)


class FreeEndo:
    """Endomorphism of the free group of rank k, given by generator images."""

    __slots__ = ("rank", "images")

    def __init__(self, images: Sequence[Word], rank: int | None = None):
        images = tuple(images)
        if not images:
            raise WordError("an endomorphism needs at least one image word")
        rank = len(images) if rank is None else rank
        if rank != len(images):
            raise WordError(f"{len(images)} images given for rank {rank}")
        for w in images:
            if w.rank != rank:
                raise WordError("image word rank does not match endomorphism rank")
        self.rank = rank
        self.images = images

    @classmethod
    def identity(cls, rank: int) -> "FreeEndo":
        return cls([Word((i,), rank) for i in range(1, rank + 1)])

    @classmethod
    def parse(cls, image_texts: Sequence[str], rank: int) -> "FreeEndo":
        return cls([Word.parse(t, rank) for t in image_texts], rank)

    @classmethod
    def from_dict(cls, data: dict) -> "FreeEndo":
        try:
            rank = int(data["rank"])
            images = list(data["images"])
        except (KeyError, TypeError) as exc:
            raise WordError(f"endomorphism object needs 'rank' and 'images': {exc}") from exc
        return cls.parse(images, rank)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "images": [w.to_text() for w in self.images]}

    def apply(self, w: Word, budget: int = DEFAULT_WORD_BUDGET) -> Word:
        if w.rank != self.rank:
            raise WordError("word rank does not match endomorphism rank")
        out: list[int] = []
        for x in w.letters:
            image = self.images[abs(x) - 1].letters
            out.extend(image if x > 0 else tuple(-y for y in reversed(image)))
            if len(out) > budget:
                raise WordError(f"image word grew past budget {budget}")
        return Word(out, self.rank)

    def compose(self, other: "FreeEndo") -> "FreeEndo":
        """self after other: compose(other).apply(w) = self.apply(other.apply(w))."""
        if self.rank != other.rank:
            raise WordError("endomorphism ranks differ")
        return FreeEndo([self.apply(w) for w in other.images], self.rank)

    def power(self, n: int) -> "FreeEndo":
        if n < 0:
            raise WordError("negative endomorphism power")
        out = FreeEndo.identity(self.rank)
        for _ in range(n):
            out = self.compose(out)
        return out

    def apply_power(self, w: Word, n: int, budget: int = DEFAULT_WORD_BUDGET) -> Word:
        """phi^n(w) by repeated application (avoids composing large images)."""
        for _ in range(n):
            w = self.apply(w, budget)
        return w

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeEndo) and self.images == other.images

    def __repr__(self) -> str:
        return f"FreeEndo({[w.to_text() for w in self.images]})"


def endo_apply(phi: FreeEndo, w: Word) -> Word:
    return phi.apply(w)


def endo_compose(phi: FreeEndo, psi: FreeEndo) -> FreeEndo:
    return phi.compose(psi)


def endo_power(phi: FreeEndo, n: int) -> FreeEndo:
    return phi.power(n)


T = TypeVar("T")


def word_evaluate(w: Word, elements: Sequence[T], mul: Callable[[T, T], T],
                  inv: Callable[[T], T], identity: T) -> T:
    """Value of w(h_1, ..., h_k) in any group given its operation suite."""
    if len(elements) != w.rank:
        raise WordError(f"{len(elements)} elements supplied for rank {w.rank}")
    acc = identity
    for x in w.letters:
        h = elements[abs(x) - 1]
        acc = mul(acc, h if x > 0 else inv(h))
    return acc


# ---------------------------------------------------------------------------
# Stallings folding

@dataclass(frozen=True)
class StallingsGraph:
    """Folded, core-trimmed subgroup graph; edges are (source, label, target)."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int, int]]
    basepoint: int
    folded: bool = True


def _fold_edges(edges: set[tuple[int, int, int]]) -> set[tuple[int, int, int]]:
    """Merge vertices until no label repeats among out-edges or in-edges."""
    edges = set(edges)
    while True:
        merge: tuple[int, int] | None = None
        out_seen: dict[tuple[int, int], int] = {}
        in_seen: dict[tuple[int, int], int] = {}
        for (u, lab, v) in sorted(edges):
            w = out_seen.get((u, lab))
            if w is not None and w != v:
                merge = (min(v, w), max(v, w))
                break
            out_seen[(u, lab)] = v
            w = in_seen.get((v, lab))
            if w is not None and w != u:
                merge = (min(u, w), max(u, w))
                break
            in_seen[(v, lab)] = u
        if merge is None:
            return edges
        keep, drop = merge
        edges = {(keep if a == drop else a, lab, keep if b == drop else b)
                 for (a, lab, b) in edges}


def stallings_fold(words: Sequence[Word], rank: int | None = None) -> StallingsGraph:
    """Folded core graph of the subgroup generated by the given words."""
    words = list(words)
    if not words:
        raise WordError("folding needs at least one word")
    rank = words[0].rank if rank is None else rank
    for w in words:
        if w.rank != rank:
            raise WordError("words have different ranks")
    edges: set[tuple[int, int, int]] = set()
    fresh = 1
    for w in words:
        prev = 0
        for pos, x in enumerate(w.letters):
            nxt = 0 if pos == len(w.letters) - 1 else fresh
            if nxt:
                fresh += 1
            if x > 0:
                edges.add((prev, x, nxt))
            else:
                edges.add((nxt, -x, prev))
            prev = nxt
    edges = _fold_edges(edges)
    # trim hanging trees: the core keeps the basepoint even if isolated
    while True:
        degree: dict[int, int] = {}
        for (u, _, v) in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        leaf = next((v for v, d in sorted(degree.items()) if d == 1 and v != 0), None)
        if leaf is None:
            break
        edges = {e for e in edges if leaf not in (e[0], e[2])}
    vertices = {0} | {u for (u, _, v) in edges} | {v for (u, _, v) in edges}
    return StallingsGraph(frozenset(vertices), frozenset(edges), 0)


def fold_graph(graph: StallingsGraph) -> StallingsGraph:
    """Re-fold an existing graph (idempotent on folded graphs)."""
    edges = _fold_edges(set(graph.edges))
    vertices = {graph.basepoint} | {u for (u, _, v) in edges} | {v for (u, _, v) in edges}
    return StallingsGraph(frozenset(vertices), frozenset(edges), graph.basepoint)


def subgroup_rank(graph: StallingsGraph) -> int:
    return len(graph.edges) - len(graph.vertices) + 1


def endo_is_injective(phi: FreeEndo) -> bool:
    """phi is injective iff its images generate a subgroup of full rank."""
    return subgroup_rank(stallings_fold(phi.images, phi.rank)) == phi.rank


# ---------------------------------------------------------------------------
# Sanov embedding into SL2(Z)

@dataclass(frozen=True)
class IntMatrix2:
    """2x2 integer matrix; arbitrary precision entries."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    def __mul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                          self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "IntMatrix2":
        if self.det() != 1:
            raise ValueError("integer inverse requires determinant 1")
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d


_S1 = IntMatrix2(1, 2, 0, 1)
_S2 = IntMatrix2(1, 0, 2, 1)


def _sanov_generator(index: int, rank: int) -> IntMatrix2:
    if rank <= 2:
        return _S1 if index == 1 else _S2
    # free subgroup of F2: x_i -> s1^i s2 s1^(-i)
    left = IntMatrix2(1, 2 * index, 0, 1)
    right = IntMatrix2(1, -2 * index, 0, 1)
    return left * _S2 * right


def sanov_embed(w: Word) -> IntMatrix2:
    """Image of w under the faithful representation F_k -> SL2(Z)."""
    gens = [_sanov_generator(i, w.rank) for i in range(1, w.rank + 1)]
    return word_evaluate(w, gens, lambda x, y: x * y, lambda x: x.inverse(),
                         IntMatrix2.identity())


def nonscalar_sanity_check(phi: FreeEndo, w: Word, n: int,
                           budget: int = DEFAULT_WORD_BUDGET) -> tuple[bool, IntMatrix2]:
    """Whether the integer matrix of phi^n(w) is non-scalar, and the matrix.

    For injective phi and w != 1 this is always non-scalar because the
    representation is faithful and never hits -Id; the matrix entries feed
    prime selection downstream.
    """
    image = phi.apply_power(w, n, budget)
    mat = sanov_embed(image)
    return (not mat.is_scalar(), mat)
