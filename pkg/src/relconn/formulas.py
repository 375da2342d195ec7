"""Conjunctive formulas whose atoms are applications of stored relations.

A constraint is a relation name applied to arguments that are variable
names or the constants 0/1; repeated variables are allowed.  A formula is
a conjunction of constraints plus the library resolving relation names.

Text format:

    # comment
    var x y z          optional, fixes variable order; otherwise first use
    rel IMP 2 : 00 10 11   optional inline relation definitions
    IMP(x,y)
    M(x,0,z)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import catalog
from .errors import ClauseExtractionError, FormulaError, FormulaParseError
from .relations import (AFFINE, BIJUNCTIVE, DUAL_HORN, HORN, ArgPattern,
                        Relation, apply_pattern, check_property)

VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_CONSTRAINT_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(([^()]*)\)\s*\Z")

SCHAEFER_CLASSES = (BIJUNCTIVE, HORN, DUAL_HORN, AFFINE)


@dataclass(frozen=True)
class Constraint:
    relation: str
    args: tuple[str, ...]

    def variables(self) -> tuple[str, ...]:
        """Distinct argument variables in order of first appearance."""
        seen: dict[str, None] = {}
        for a in self.args:
            if a not in ("0", "1"):
                seen.setdefault(a)
        return tuple(seen)

    def __str__(self) -> str:
        return f"{self.relation}({','.join(self.args)})"


@dataclass(eq=False)
class Formula:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    library: dict[str, Relation] = field(repr=False)

    def __post_init__(self) -> None:
        if not self.constraints:
            raise FormulaError("formula needs at least one constraint")
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise FormulaError("duplicate variable in variable list")
        for v in self.variables:
            if not VAR_RE.match(v):
                raise FormulaError(f"bad variable name {v!r}")
        for c in self.constraints:
            rel = self.library.get(c.relation)
            if rel is None:
                raise FormulaError(f"unknown relation {c.relation!r}")
            if len(c.args) != rel.arity:
                raise FormulaError(
                    f"{c}: relation {c.relation!r} has arity {rel.arity}")
            for a in c.args:
                if a in ("0", "1"):
                    continue
                if a not in declared:
                    raise FormulaError(f"{c}: variable {a!r} not declared")

    @property
    def n(self) -> int:
        return len(self.variables)

    def relation_of(self, c: Constraint) -> Relation:
        return self.library[c.relation]

    def used_relations(self) -> list[Relation]:
        """Distinct relations referenced by constraints, in first-use order."""
        seen: dict[str, Relation] = {}
        for c in self.constraints:
            seen.setdefault(c.relation, self.library[c.relation])
        return list(seen.values())

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.constraints)


def make_formula(constraints: Iterable[Constraint],
                 library: Mapping[str, Relation],
                 variables: Iterable[str] | None = None) -> Formula:
    """Build a formula; variable order defaults to first appearance."""
    cons = tuple(constraints)
    if variables is None:
        seen: dict[str, None] = {}
        for c in cons:
            for v in c.variables():
                seen.setdefault(v)
        variables = tuple(seen)
    return Formula(tuple(variables), cons, dict(library))


def parse_formula(text: str,
                  extra_relations: Mapping[str, Relation] | None = None) -> Formula:
    """Parse formula text; relation names resolve against inline `rel` lines,
    then `extra_relations`, then the built-in catalog."""
    library: dict[str, Relation] = dict(catalog.CATALOG)
    if extra_relations:
        for name, rel in extra_relations.items():
            if name in library and library[name] != rel:
                raise FormulaParseError(f"relation {name!r} conflicts with catalog")
            library[name] = rel
    header: tuple[str, ...] | None = None
    constraints: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = catalog.strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("rel "):
            rel = parse_rel_line(line, lineno)
            if rel.name in library and library[rel.name] != rel:
                raise FormulaParseError(f"line {lineno}: relation {rel.name!r} redefined")
            library[rel.name] = rel
            continue
        if line.startswith("var ") or line == "var":
            if header is not None:
                raise FormulaParseError(f"line {lineno}: second var line")
            names = line.split()[1:]
            for v in names:
                if not VAR_RE.match(v):
                    raise FormulaParseError(f"line {lineno}: bad variable name {v!r}")
            header = tuple(names)
            continue
        m = _CONSTRAINT_RE.match(line)
        if not m:
            raise FormulaParseError(f"line {lineno}: cannot parse {line!r}")
        name, argtext = m.groups()
        args = tuple(a.strip() for a in argtext.split(",")) if argtext.strip() else ()
        for a in args:
            if a in ("0", "1"):
                continue
            if not VAR_RE.match(a):
                raise FormulaParseError(f"line {lineno}: bad argument {a!r}")
        if not args:
            raise FormulaParseError(f"line {lineno}: constraint with no arguments")
        constraints.append(Constraint(name, args))
    try:
        return make_formula(constraints, library, header)
    except FormulaError as exc:
        raise FormulaParseError(str(exc)) from None


def parse_rel_line(line: str, lineno: int) -> Relation:
    try:
        return catalog.parse_relation_line(line)
    except FormulaParseError as exc:
        raise FormulaParseError(f"line {lineno}: {exc}") from None


def format_formula(phi: Formula) -> str:
    """Self-contained text for a formula (relations inlined)."""
    lines = [catalog.format_relation(rel) for rel in phi.used_relations()]
    lines.append("var " + " ".join(phi.variables))
    lines.extend(str(c) for c in phi.constraints)
    return "\n".join(lines) + "\n"


def evaluate(phi: Formula, assignment: Mapping[str, int]) -> bool:
    """Truth of the formula under a total assignment."""
    for c in phi.constraints:
        rel = phi.relation_of(c)
        idx = 0
        for a in c.args:
            if a == "0":
                bit = 0
            elif a == "1":
                bit = 1
            else:
                try:
                    bit = assignment[a]
                except KeyError:
                    raise FormulaError(f"assignment misses variable {a!r}") from None
            idx = (idx << 1) | (1 if bit else 0)
        if idx not in rel.members:
            return False
    return True


def constraint_relation(phi: Formula, i: int) -> tuple[tuple[str, ...], Relation]:
    """Relation of constraint i over its distinct variables, in name order.

    Constants and repeats in the argument list are folded in, so the result
    ranges over the sorted distinct variables of the constraint.
    """
    c = phi.constraints[i]
    rel = phi.relation_of(c)
    vars_sorted = tuple(sorted(c.variables()))
    if not vars_sorted:
        raise FormulaError(f"{c}: constraint has no variables")
    pos = {v: j for j, v in enumerate(vars_sorted)}
    slots = tuple(a if a in ("0", "1") else pos[a] for a in c.args)
    return vars_sorted, apply_pattern(rel, ArgPattern(slots))


@dataclass(frozen=True)
class CnfClause:
    """Disjunction of literals over variable names."""
    pos: frozenset[str]
    neg: frozenset[str]
    origin: int | None = None

    def satisfied_by(self, assignment: Mapping[str, int]) -> bool:
        return (any(assignment[v] for v in self.pos)
                or any(not assignment[v] for v in self.neg))

    def __str__(self) -> str:
        lits = sorted(self.pos) + ["-" + v for v in sorted(self.neg)]
        return " ".join(lits) if lits else "<empty>"


@dataclass(frozen=True)
class XorEquation:
    """GF(2) equation: sum of the variables equals rhs."""
    vars: frozenset[str]
    rhs: int
    origin: int | None = None

    def satisfied_by(self, assignment: Mapping[str, int]) -> bool:
        s = 0
        for v in self.vars:
            s ^= 1 if assignment[v] else 0
        return s == self.rhs


@dataclass(frozen=True)
class ClauseSet:
    schaefer_class: str
    variables: tuple[str, ...]
    clauses: tuple[CnfClause, ...] = ()
    equations: tuple[XorEquation, ...] = ()


def _cnf_implicates(vars_: tuple[str, ...], members: frozenset[int],
                    shape: str) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Prime implicates of the given shape, as (positive, negative) var sets.

    shape: 'bijunctive' caps clause width at 2; 'horn' allows at most one
    positive literal; 'dual_horn' at most one negative.
    """
    k = len(vars_)
    coords = list(range(k))
    valid: list[tuple[frozenset[str], frozenset[str]]] = []

    def clause_valid(pos_mask: int, neg_mask: int) -> bool:
        for t in members:
            if (t & pos_mask) == 0 and (t & neg_mask) == neg_mask:
                return False  # t falsifies every literal
        return True

    def mask_of(coord_set: tuple[int, ...]) -> int:
        m = 0
        for c in coord_set:
            m |= 1 << (k - 1 - c)
        return m

    from itertools import combinations
    if shape == BIJUNCTIVE:
        candidates = []
        candidates.append(((), ()))
        for width in (1, 2):
            for sel in combinations(coords, width):
                for signs in range(1 << width):
                    pos = tuple(c for b, c in enumerate(sel) if signs >> b & 1)
                    neg = tuple(c for b, c in enumerate(sel) if not signs >> b & 1)
                    candidates.append((pos, neg))
    elif shape in (HORN, DUAL_HORN):
        candidates = [((), ())]
        for width in range(1, k + 1):
            for sel in combinations(coords, width):
                # all-negative plus each single-positive choice
                candidates.append(((), sel))
                for h in sel:
                    rest = tuple(c for c in sel if c != h)
                    candidates.append(((h,), rest))
        if shape == DUAL_HORN:
            candidates = [(neg, pos) for pos, neg in candidates]
    else:
        raise ClauseExtractionError(f"no clause shape for {shape!r}")

    for pos, neg in candidates:
        if clause_valid(mask_of(pos), mask_of(neg)):
            valid.append((frozenset(vars_[c] for c in pos),
                          frozenset(vars_[c] for c in neg)))
    # prime = minimal literal sets among the valid ones
    lits = [(p | frozenset(("-" + v for v in n)), p, n) for p, n in valid]
    lits.sort(key=lambda x: len(x[0]))
    prime: list[tuple[frozenset[str], frozenset[str]]] = []
    kept: list[frozenset[str]] = []
    for ls, p, n in lits:
        if not any(k2 < ls or k2 == ls for k2 in kept):
            kept.append(ls)
            prime.append((p, n))
    return prime


def _xor_basis(vars_: tuple[str, ...],
               members: frozenset[int]) -> list[tuple[frozenset[str], int]]:
    """Basis of all GF(2) equations satisfied by every member tuple."""
    k = len(vars_)
    width = k + 1  # augmented column for the right-hand side
    rows = [(t << 1) | 1 for t in members]
    # echelonize the rows, then read the nullspace off the free columns
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    pivots = {b.bit_length() - 1 for b in basis}
    free = [c for c in range(width) if c not in pivots]
    out: list[tuple[frozenset[str], int]] = []
    for f in free:
        v = 1 << f
        # eliminate pivot columns to make v orthogonal to every row
        changed = True
        while changed:
            changed = False
            for b in basis:
                if bin(v & b).count("1") % 2 == 1:
                    pcol = b.bit_length() - 1
                    v ^= 1 << pcol
                    changed = True
        names = frozenset(vars_[k - 1 - (c - 1)] for c in range(1, width) if v >> c & 1)
        rhs = v & 1
        out.append((names, rhs))
    return out


def to_clausal(phi: Formula, schaefer_class: str) -> ClauseSet:
    """Rewrite every constraint as clauses/equations of the given class.

    Raises ClauseExtractionError when some constraint relation is not
    closed under the class's characteristic operation.
    """
    if schaefer_class not in SCHAEFER_CLASSES:
        raise ClauseExtractionError(f"unknown clause class {schaefer_class!r}")
    clauses: list[CnfClause] = []
    equations: list[XorEquation] = []
    for i in range(len(phi.constraints)):
        vars_, rel = constraint_relation(phi, i)
        if not check_property(rel, schaefer_class):
            raise ClauseExtractionError(
                f"constraint {phi.constraints[i]} is not {schaefer_class}")
        if schaefer_class == AFFINE:
            for names, rhs in _xor_basis(vars_, rel.members):
                equations.append(XorEquation(names, rhs, i))
        else:
            for pos, neg in _cnf_implicates(vars_, rel.members, schaefer_class):
                clauses.append(CnfClause(pos, neg, i))
    cs = ClauseSet(schaefer_class, phi.variables, tuple(clauses), tuple(equations))
    _assert_clausal_equivalent(phi, cs)
    return cs


def _assert_clausal_equivalent(phi: Formula, cs: ClauseSet) -> None:
    """Enumeration check that the clause set defines the same solutions."""
    n = phi.n
    if n > 16:
        return  # too large to verify eagerly; covered by tests on small inputs
    names = phi.variables
    for a in range(1 << n):
        asg = {v: (a >> (n - 1 - j)) & 1 for j, v in enumerate(names)}
        lhs = evaluate(phi, asg)
        rhs = (all(c.satisfied_by(asg) for c in cs.clauses)
               and all(e.satisfied_by(asg) for e in cs.equations))
        if lhs != rhs:
            raise ClauseExtractionError(
                f"clause conversion changed the solution set at {asg}")
