"""
Finite presentations and Todd-Coxeter coset enumeration.

A presentation lists generator names and relator words. Enumerating the
cosets of the trivial subgroup (HLT strategy with coincidence processing)
yields the regular action of the group, from which the multiplication table
is read off along a breadth-first spanning tree of words.

Presentation files are plain text:

    gens 2
    a^4
    b^2
    b a b^-1 a

The first line gives the generator count, optionally followed by generator
names (a, b, c, ... by default); every further non-empty line is a relator.
"""

import re
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import structlog

from padic_k1.exceptions import BadPresentationError, EnumerationBudgetExceededError
from padic_k1.groups.group import Group
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?")

Word = tuple[int, ...]


@dataclass(frozen=True)
class Presentation:
    """
    Attributes:
        generators (tuple[str, ...]): Generator names
        relators (tuple[Word, ...]): Words as signed 1-based generator indices
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    def word_to_text(self, word: Word) -> str:
        if not word:
            return "1"
        return " ".join(
            self.generators[abs(s) - 1] + ("^-1" if s < 0 else "") for s in word
        )


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """
    Parse a word such as "a b^-1 a^3".

    Raises:
        BadPresentationError: On unknown generators or stray characters
    """
    index = {name: i + 1 for i, name in enumerate(generators)}
    word: list[int] = []
    pos = 0
    stripped = text.strip()
    while pos < len(stripped):
        if stripped[pos] in " *\t":
            pos += 1
            continue
        match = _TOKEN.match(stripped, pos)
        if match is None or match.group(1) not in index:
            msg = f"cannot parse relator {text!r} at position {pos}"
            raise BadPresentationError(msg)
        letter = index[match.group(1)]
        exponent = int(match.group(2)) if match.group(2) else 1
        word += [letter if exponent > 0 else -letter] * abs(exponent)
        pos = match.end()
    return tuple(word)


def parse_presentation(text: str) -> Presentation:
    """
    Parse the text presentation format.

    Raises:
        BadPresentationError: If the header or a relator is malformed
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        msg = "presentation is empty"
        raise BadPresentationError(msg)
    header = lines[0].split()
    if len(header) < 2 or header[0] != "gens" or not header[1].isdigit():
        msg = f"presentation must start with 'gens k', got {lines[0]!r}"
        raise BadPresentationError(msg)
    count = int(header[1])
    names = header[2:] or [chr(ord("a") + i) for i in range(count)]
    if count == 0 or len(names) != count:
        msg = f"generator names {names} do not match the count {count}"
        raise BadPresentationError(msg)
    relators = tuple(parse_word(ln, names) for ln in lines[1:])
    return Presentation(tuple(names), relators)


def load_presentation(path: Path) -> Presentation:
    try:
        return parse_presentation(path.read_text(encoding="utf-8"))
    except OSError as e:
        msg = f"cannot read presentation file {path}: {e}"
        raise BadPresentationError(msg) from e


class CosetTable:
    """
    Coset table of the trivial subgroup, columns 2i and 2i+1 holding the
    action of generator i and of its inverse.
    """

    def __init__(self, generator_count: int, bound: int) -> None:
        self.columns = 2 * generator_count
        self.bound = bound
        self.table: list[list[int]] = [[-1] * self.columns]
        self.parent: list[int] = [0]

    @staticmethod
    def column(letter: int) -> int:
        return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.bound:
            msg = f"coset enumeration exceeded {self.bound} cosets"
            raise EnumerationBudgetExceededError(msg)
        new = len(self.table)
        self.table.append([-1] * self.columns)
        self.parent.append(new)
        self.table[c][x] = new
        self.table[new][x ^ 1] = c

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        a, b = self.rep(k), self.rep(l)
        if a == b:
            return
        low, high = min(a, b), max(a, b)
        self.parent[high] = low
        queue.append(high)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.columns):
                f = self.table[e][x]
                if f < 0:
                    continue
                self.table[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] >= 0:
                    self._merge(f1, self.table[e1][x], queue)
                elif self.table[f1][x ^ 1] >= 0:
                    self._merge(e1, self.table[f1][x ^ 1], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, word: Sequence[int]) -> None:
        cols = [self.column(s) for s in word]
        f, b = c, c
        i, j = 0, len(cols) - 1
        while True:
            while i <= j and self.table[f][cols[i]] >= 0:
                f = self.table[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and self.table[b][cols[j] ^ 1] >= 0:
                b = self.table[b][cols[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                self.table[f][cols[i]] = b
                self.table[b][cols[i] ^ 1] = f
                return
            self.define(f, cols[i])

    def enumerate(self, relators: Sequence[Sequence[int]]) -> None:
        c = 0
        while c < len(self.table):
            if self.alive(c):
                for r in relators:
                    self.scan_and_fill(c, r)
                    if not self.alive(c):
                        break
                if self.alive(c):
                    for x in range(self.columns):
                        if self.table[c][x] < 0:
                            self.define(c, x)
            c += 1

    def compact(self) -> list[list[int]]:
        """The table restricted to live cosets, renumbered from 0."""
        live = [c for c in range(len(self.table)) if self.alive(c)]
        index = {c: i for i, c in enumerate(live)}
        out = []
        for c in live:
            row = []
            for x in range(self.columns):
                target = self.table[c][x]
                if target < 0:
                    msg = "coset table is incomplete after enumeration"
                    raise BadPresentationError(msg)
                row.append(index[self.rep(target)])
            out.append(row)
        return out


def group_from_presentation(
    presentation: Presentation, bound: int | None = None, name: str = ""
) -> Group:
    """
    Enumerate a finite presentation into a verified group.

    Raises:
        EnumerationBudgetExceededError: If more than bound cosets are needed
        NotAGroupError: If the resulting table fails verification
    """
    cap = settings.cap(settings.coset_bound) if bound is None else bound
    enumerator = CosetTable(presentation.generator_count, cap)
    enumerator.enumerate(presentation.relators)
    action = enumerator.compact()
    order = len(action)
    words: list[Word] = [()] * order
    found = [False] * order
    found[0] = True
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for g in range(presentation.generator_count):
            for letter in (g + 1, -(g + 1)):
                d = action[c][CosetTable.column(letter)]
                if not found[d]:
                    found[d] = True
                    words[d] = (*words[c], letter)
                    queue.append(d)

    def act(c: int, word: Word) -> int:
        for s in word:
            c = action[c][CosetTable.column(s)]
        return c

    table = [[act(a, words[b]) for b in range(order)] for a in range(order)]
    labels = [presentation.word_to_text(w) for w in words]
    generators = {n: action[0][CosetTable.column(i + 1)] for i, n in enumerate(presentation.generators)}
    logger.debug("coset_enumeration", order=order, cosets_defined=len(enumerator.table))
    return Group(table, name=name, labels=labels, generators=generators, relators=presentation.relators)
