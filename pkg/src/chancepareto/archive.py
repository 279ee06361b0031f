"""The GSEMO population: one solution per non-dominated objective vector."""

from __future__ import annotations

import enum
import os
from typing import Iterable, Iterator

from .instance import format_number
from .objectives import (
    ObjectiveVector,
    ObjectiveVector2D,
    ObjectiveVector3D,
    Solution,
)


class InsertOutcome(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"

    def __bool__(self):
        return self is InsertOutcome.ACCEPTED


class ArchiveFormatError(ValueError):
    pass


def _strongly_dominates(a, b, dim: int) -> bool:
    if dim == 3:
        return a[0] <= b[0] and a[1] <= b[1] and a[2] >= b[2] and a != b
    return a[0] <= b[0] and a[1] <= b[1] and a != b


def _weakly_dominates(a, b, dim: int) -> bool:
    if dim == 3:
        return a[0] <= b[0] and a[1] <= b[1] and a[2] >= b[2]
    return a[0] <= b[0] and a[1] <= b[1]


class ParetoArchive:
    """Population kept by GSEMO-style algorithms.

    ``dim`` selects the dominance relation: 2 minimizes both components,
    3 minimizes the first two and maximizes the third.
    """

    def __init__(self, dim: int = 3):
        if dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {dim}")
        self.dim = dim
        self._solutions: list[Solution] = []
        self._vectors: list[tuple] = []
        self.max_size_seen = 0

    def __len__(self):
        return len(self._vectors)

    def __iter__(self) -> Iterator[tuple[Solution, ObjectiveVector]]:
        return iter(zip(self._solutions, self._vectors))

    @property
    def solutions(self) -> list[Solution]:
        return list(self._solutions)

    @property
    def vectors(self) -> list[ObjectiveVector]:
        return list(self._vectors)

    def try_insert(self, y: Solution, fy: ObjectiveVector) -> InsertOutcome:
        """Reject ``y`` if a member strongly dominates it; otherwise add it and
        drop every member it weakly dominates (an equal vector is replaced)."""
        dim = self.dim
        if len(fy) != dim:
            raise ValueError(f"expected a {dim}-component vector, got {fy!r}")
        vectors = self._vectors
        for w in vectors:
            if _strongly_dominates(w, fy, dim):
                return InsertOutcome.REJECTED
        keep = [i for i, z in enumerate(vectors) if not _weakly_dominates(fy, z, dim)]
        if len(keep) != len(vectors):
            self._solutions = [self._solutions[i] for i in keep]
            self._vectors = [vectors[i] for i in keep]
        self._solutions.append(y)
        self._vectors.append(fy)
        self.max_size_seen = max(self.max_size_seen, len(self._vectors))
        return InsertOutcome.ACCEPTED

    def sample_uniform(self, rng) -> Solution:
        """Uniformly chosen member; consumes one ``rng.random()`` draw."""
        if not self._vectors:
            raise LookupError("cannot sample from an empty archive")
        idx = min(int(rng.random() * len(self._vectors)), len(self._vectors) - 1)
        return self._solutions[idx]

    def check_invariants(self) -> list[str]:
        """Return a description of every violated invariant (empty when sound)."""
        problems = []
        vectors = self._vectors
        if len(set(vectors)) != len(vectors):
            problems.append("duplicate objective vectors")
        for i, a in enumerate(vectors):
            for j, b in enumerate(vectors):
                if i != j and _strongly_dominates(a, b, self.dim):
                    problems.append(f"member {i} {a} strongly dominates member {j} {b}")
        if self.max_size_seen < len(vectors):
            problems.append("max_size_seen below current size")
        return problems

    @classmethod
    def from_members(
        cls, members: Iterable[tuple[Solution, ObjectiveVector]], dim: int, max_size_seen: int = 0
    ) -> "ParetoArchive":
        archive = cls(dim)
        for sol, vec in members:
            archive.try_insert(sol, vec)
        archive.max_size_seen = max(archive.max_size_seen, max_size_seen)
        return archive


def dumps_archive(archive: ParetoArchive, n: int) -> str:
    """Text dump: a header comment, then one member per line as
    ``component ... hexbits`` (item 0 is the least significant bit)."""
    lines = [f"# archive dim={archive.dim} n={n} size={len(archive)} max_size={archive.max_size_seen}"]
    for sol, vec in archive:
        parts = [format_number(v) for v in vec]
        parts.append(sol.to_hex())
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def loads_archive(text: str) -> tuple[ParetoArchive, int]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# archive"):
        raise ArchiveFormatError("missing '# archive' header line")
    header = dict(tok.split("=", 1) for tok in lines[0].split()[2:] if "=" in tok)
    try:
        dim = int(header["dim"])
        n = int(header["n"])
        max_size = int(header.get("max_size", 0))
    except (KeyError, ValueError):
        raise ArchiveFormatError(f"bad archive header: {lines[0]!r}") from None

    archive = ParetoArchive(dim)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != dim + 1:
            raise ArchiveFormatError(f"line {lineno}: expected {dim + 1} fields, got {len(tokens)}")
        try:
            if dim == 3:
                vec = ObjectiveVector3D(float(tokens[0]), float(tokens[1]), int(tokens[2]))
            else:
                vec = ObjectiveVector2D(float(tokens[0]), float(tokens[1]))
            sol = Solution.from_hex(tokens[-1], n)
        except ValueError as exc:
            raise ArchiveFormatError(f"line {lineno}: {exc}") from None
        # Members of a dump are mutually non-dominated, so appending keeps them all.
        archive._solutions.append(sol)
        archive._vectors.append(vec)
    archive.max_size_seen = max(max_size, len(archive))
    return archive, n


def save_archive(archive: ParetoArchive, n: int, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_archive(archive, n))


def load_archive(path: str | os.PathLike) -> tuple[ParetoArchive, int]:
    with open(path, encoding="utf-8") as fh:
        return loads_archive(fh.read())
