"""DIMACS CNF parsing, evaluation and the canonical assignment encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence


class ParseError(ValueError):
    """Malformed DIMACS input. ``line`` is 1-based, or None if not tied to a line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Literal(NamedTuple):
    var: int
    negated: bool

    @property
    def signed(self) -> int:
        return -self.var if self.negated else self.var

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        return cls(abs(lit), lit < 0)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("clause must be nonempty")

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        # dict keeps first-seen order while dropping repeats
        return cls(tuple(Literal.from_int(x) for x in dict.fromkeys(lits)))

    @property
    def signed(self) -> tuple[int, ...]:
        return tuple(lit.signed for lit in self.literals)

    @property
    def tautological(self) -> bool:
        s = set(self.signed)
        return any(-x in s for x in s)


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()
    name: str = ""
    warnings: tuple[str, ...] = ()
    signed_clauses: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        signed = tuple(c.signed for c in self.clauses)
        for c in signed:
            for lit in c:
                if abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} exceeds num_vars={self.num_vars}")
        object.__setattr__(self, "signed_clauses", signed)

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]], name: str = "") -> "Formula":
        return cls(num_vars, tuple(Clause.from_ints(c) for c in clauses), name)


@dataclass(frozen=True, order=True)
class Assignment:
    """Total assignment; ``bits[i]`` is the value (0/1) of variable ``i + 1``."""

    bits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    @classmethod
    def of(cls, bits: Iterable[int]) -> "Assignment":
        return cls(tuple(1 if b else 0 for b in bits))

    @classmethod
    def zeros(cls, n: int) -> "Assignment":
        return cls((0,) * n)

    def to_line(self) -> str:
        return serialize_assignment(self)

    def to_bytes(self) -> bytes:
        return serialize_assignment(self).encode("ascii")

    def hamming(self, other: "Assignment") -> int:
        _check_len(len(self), len(other))
        return sum(a != b for a, b in zip(self.bits, other.bits))


def _check_len(expected: int, got: int) -> None:
    if expected != got:
        raise ValueError(f"assignment length {got} does not match {expected} variables")


def parse_dimacs(text: str, name: str = "") -> Formula:
    num_vars = None
    declared = 0
    clauses: list[Clause] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB end-of-data marker
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if num_vars < 0 or declared < 0:
                raise ParseError("negative count in header", lineno)
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"non-integer token {tok!r}", lineno) from None
            if lit == 0:
                if current:
                    clauses.append(Clause.from_ints(current))
                    current = []
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"literal {lit} out of range (num_vars={num_vars})", lineno)
            current.append(lit)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        clauses.append(Clause.from_ints(current))
    warnings = ()
    if len(clauses) != declared:
        warnings = (f"header declares {declared} clauses, found {len(clauses)}",)
    return Formula(num_vars, tuple(clauses), name, warnings)


def read_dimacs(path: str | Path) -> Formula:
    path = Path(path)
    return parse_dimacs(path.read_text(encoding="utf-8"), name=path.stem)


def to_dimacs(f: Formula) -> str:
    out = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    out.extend(" ".join(map(str, c)) + " 0" for c in f.signed_clauses)
    return "\n".join(out) + "\n"


def evaluate(f: Formula, a: Assignment) -> bool:
    _check_len(f.num_vars, len(a))
    bits = a.bits
    for clause in f.signed_clauses:
        for lit in clause:
            if (bits[lit - 1] == 1) if lit > 0 else (bits[-lit - 1] == 0):
                break
        else:
            return False
    return True


def unsat_clauses(f: Formula, a: Assignment) -> list[int]:
    _check_len(f.num_vars, len(a))
    bits = a.bits
    out = []
    for i, clause in enumerate(f.signed_clauses):
        if not any((bits[l - 1] == 1) if l > 0 else (bits[-l - 1] == 0) for l in clause):
            out.append(i)
    return out


def serialize_assignment(a: Assignment) -> str:
    return "".join("1" if b else "0" for b in a.bits) + "\n"


def parse_assignment(line: str) -> Assignment:
    body = line.rstrip("\r\n")
    if any(ch not in "01" for ch in body):
        raise ValueError(f"assignment line must contain only '0'/'1': {line!r}")
    return Assignment(tuple(1 if ch == "1" else 0 for ch in body))


def read_samples(path: str | Path) -> list[Assignment]:
    with open(path, encoding="ascii") as fh:
        # one line per member; a zero-variable member is an empty line
        return [parse_assignment(line) for line in fh.read().splitlines()]


def write_samples(path: str | Path, members: Sequence[Assignment]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.writelines(serialize_assignment(a) for a in members)
