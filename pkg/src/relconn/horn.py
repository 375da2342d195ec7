"""Horn clause sets: implication closure, self-implicating sets, normal form.

A Horn clause has at most one positive literal.  Here a clause is (head,
body): `head | -b1 -b2` in text is the clause head OR NOT b1 OR NOT b2, a
bare `head` is a positive unit, and `- b1 b2` is a restraint clause (all
literals negative).  The body of a restraint clause is its restraint set.

Implication is syntactic: Imp(U) is the least superset of U containing
every positive-unit head and closed under firing implication clauses whose
body it contains.  U is self-implicating when every member is implied by
the rest of U, and maximal when additionally Imp(U) = U.  For clause sets
without positive units the components of the solution graph correspond
one-to-one to the maximal self-implicating sets that contain no restraint
set, which is what maximal_self_implicating_sets computes and verifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from . import bitspace
from .errors import FormulaParseError, HornStructureError, VarsLimitError
from .formulas import VAR_RE, ClauseSet, CnfClause, Formula, to_clausal
from .relations import HORN

VARS_MAX = 24


@dataclass(frozen=True)
class HornClause:
    head: str | None
    body: frozenset[str]
    origin: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.body, frozenset):
            object.__setattr__(self, "body", frozenset(self.body))
        if self.head is not None and not isinstance(self.head, str):
            raise HornStructureError(f"bad clause head {self.head!r}")

    @property
    def is_positive_unit(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_implication(self) -> bool:
        """One positive literal and at least one negative."""
        return self.head is not None and bool(self.body)

    @property
    def is_multi_implication(self) -> bool:
        return self.head is not None and len(self.body) >= 2

    @property
    def is_restraint(self) -> bool:
        return self.head is None and bool(self.body)

    @property
    def is_empty(self) -> bool:
        return self.head is None and not self.body

    def variables(self) -> frozenset[str]:
        return self.body | ({self.head} if self.head is not None else frozenset())

    def satisfied_by(self, assignment: Mapping[str, int]) -> bool:
        if self.head is not None and assignment[self.head]:
            return True
        return any(not assignment[v] for v in self.body)

    def __str__(self) -> str:
        body = " ".join("-" + v for v in sorted(self.body))
        if self.head is None:
            return "- " + " ".join(sorted(self.body)) if self.body else "-"
        if not self.body:
            return self.head
        return f"{self.head} | {body}"


@dataclass(frozen=True)
class HornView:
    variables: tuple[str, ...]
    clauses: tuple[HornClause, ...]

    def __post_init__(self) -> None:
        declared = set(self.variables)
        for c in self.clauses:
            missing = c.variables() - declared
            if missing:
                raise HornStructureError(f"clause {c} uses undeclared {sorted(missing)}")

    @property
    def n(self) -> int:
        return len(self.variables)

    def has_positive_units(self) -> bool:
        return any(c.is_positive_unit for c in self.clauses)

    def restraint_sets(self) -> list[frozenset[str]]:
        return [c.body for c in self.clauses if c.is_restraint]

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.clauses)


def view_from_clause_set(cs: ClauseSet) -> HornView:
    if cs.schaefer_class != HORN:
        raise HornStructureError(f"clause set is {cs.schaefer_class}, not horn")
    clauses = []
    for c in cs.clauses:
        if len(c.pos) > 1:
            raise HornStructureError(f"clause {c} has two positive literals")
        head = next(iter(c.pos)) if c.pos else None
        clauses.append(HornClause(head, c.neg, c.origin))
    return HornView(cs.variables, tuple(clauses))


def view_from_formula(phi: Formula) -> HornView:
    """Horn clauses of a formula whose relations are all Horn."""
    return view_from_clause_set(to_clausal(phi, HORN))


def view_to_clause_set(view: HornView) -> ClauseSet:
    clauses = tuple(
        CnfClause(frozenset() if c.head is None else frozenset({c.head}),
                  c.body, c.origin)
        for c in view.clauses)
    return ClauseSet(HORN, view.variables, clauses, ())


def parse_horn(text: str) -> HornView:
    """Parse the clause text format (see module docstring); `#` comments."""
    header: tuple[str, ...] | None = None
    clauses: list[HornClause] = []
    seen: dict[str, None] = {}

    def note(v: str, lineno: int) -> str:
        if not VAR_RE.match(v):
            raise FormulaParseError(f"line {lineno}: bad variable name {v!r}")
        seen.setdefault(v)
        return v

    for lineno, raw in enumerate(text.splitlines(), 1):
        pos = raw.find("#")
        line = (raw if pos < 0 else raw[:pos]).strip()
        if not line:
            continue
        if line.startswith("var ") or line == "var":
            if header is not None:
                raise FormulaParseError(f"line {lineno}: second var line")
            header = tuple(note(v, lineno) for v in line.split()[1:])
            continue
        if line == "-":
            clauses.append(HornClause(None, frozenset()))
            continue
        if line.startswith("- ") or all(t.startswith("-") for t in line.split()):
            toks = line.split()
            if toks[0] == "-":
                toks = toks[1:]
            body = frozenset(note(t.lstrip("-"), lineno) for t in toks)
            clauses.append(HornClause(None, body))
            continue
        if "|" in line:
            left, _, right = line.partition("|")
            head = left.strip()
            if not head:
                raise FormulaParseError(f"line {lineno}: missing head before |")
            body = set()
            for t in right.split():
                if not t.startswith("-"):
                    raise FormulaParseError(
                        f"line {lineno}: body literal {t!r} must be negative")
                body.add(note(t[1:], lineno))
            clauses.append(HornClause(note(head, lineno), frozenset(body)))
            continue
        toks = line.split()
        if len(toks) == 1:
            clauses.append(HornClause(note(toks[0], lineno), frozenset()))
            continue
        raise FormulaParseError(f"line {lineno}: cannot parse clause {line!r}")
    variables = header if header is not None else tuple(seen)
    return HornView(variables, tuple(clauses))


def format_horn(view: HornView) -> str:
    lines = ["var " + " ".join(view.variables)]
    lines.extend(str(c) for c in view.clauses)
    return "\n".join(lines) + "\n"


def _imp_over(clauses: Sequence[HornClause], start: Iterable[str]) -> frozenset[str]:
    current = set(start)
    rules = []
    for c in clauses:
        if c.head is None:
            continue
        if not c.body:
            current.add(c.head)
        else:
            rules.append(c)
    changed = True
    while changed:
        changed = False
        for c in rules:
            if c.head not in current and c.body <= current:
                current.add(c.head)
                changed = True
    return frozenset(current)


def imp(view: HornView, start: Iterable[str]) -> frozenset[str]:
    """Least fixpoint of the implication clauses over `start`.

    Seeds with the start set, adds every positive-unit head, then fires any
    implication clause whose body is contained in the current set.
    """
    return _imp_over(view.clauses, start)


def is_implied(view: HornView, x: str) -> bool:
    """Is x implied by all the other variables?"""
    return x in imp(view, set(view.variables) - {x})


def is_self_implicating(view: HornView, subset: Iterable[str]) -> bool:
    """Every member is implied by the remaining members (empty set: yes)."""
    u = frozenset(subset)
    return all(x in imp(view, u - {x}) for x in u)


def is_maximal_self_implicating(view: HornView, subset: Iterable[str]) -> bool:
    u = frozenset(subset)
    return is_self_implicating(view, u) and imp(view, u) == u


def has_restraint_subset(view: HornView, subset: Iterable[str]) -> bool:
    u = frozenset(subset)
    return any(r <= u for r in view.restraint_sets())


def solution_space(view: HornView) -> int:
    """Bitmask of satisfying assignments, same index convention as formulas."""
    n = view.n
    if n > VARS_MAX:
        raise VarsLimitError(f"{n} variables exceed the exhaustive bound {VARS_MAX}")
    full = bitspace.full_mask(n)
    pos = {v: n - 1 - j for j, v in enumerate(view.variables)}
    space = full
    for c in view.clauses:
        ind = 0
        if c.head is not None:
            ind |= bitspace.coord_mask(n, pos[c.head])
        for v in c.body:
            ind |= full ^ bitspace.coord_mask(n, pos[v])
        space &= ind
        if not space:
            break
    return space


def solutions(view: HornView) -> list[int]:
    return list(bitspace.iter_bits(solution_space(view)))


def locally_minimal_solutions(view: HornView) -> list[int]:
    """Solutions none of whose 1-coordinates can be flipped down."""
    space = solution_space(view)
    out = []
    for idx in bitspace.iter_bits(space):
        ones = idx
        ok = True
        while ones:
            low = ones & -ones
            if (space >> (idx ^ low)) & 1:
                ok = False
                break
            ones ^= low
        if ok:
            out.append(idx)
    return out


def _ones_set(view: HornView, idx: int) -> frozenset[str]:
    n = view.n
    return frozenset(v for j, v in enumerate(view.variables)
                     if (idx >> (n - 1 - j)) & 1)


def maximal_self_implicating_sets(view: HornView) -> list[frozenset[str]]:
    """The 1-sets of the per-component minimum solutions, verified.

    Requires a clause set without positive units.  Each returned set is
    checked to be maximal self-implicating and to contain no restraint set;
    the empty set stands for the component of the all-zero solution.
    """
    if view.has_positive_units():
        raise HornStructureError("clause set has positive units")
    out = []
    for comp in bitspace.component_masks(solution_space(view), view.n):
        lower = ~0
        for idx in bitspace.iter_bits(comp):
            lower &= idx
        if not (comp >> lower) & 1:
            raise HornStructureError("component without a minimum solution")
        u = _ones_set(view, lower)
        if not is_maximal_self_implicating(view, u) or has_restraint_subset(view, u):
            raise HornStructureError(
                f"component minimum {sorted(u)} fails the structure check")
        out.append(u)
    return out


def maximum_self_implicating_subset(view: HornView,
                                    ground: Iterable[str]) -> frozenset[str]:
    """Largest self-implicating subset of `ground` (unions stay self-implicating,
    so the maximum is unique); computed by peeling unsupported members."""
    u = set(ground)
    changed = True
    while changed:
        changed = False
        for x in sorted(u):
            if x not in imp(view, u - {x}):
                u.discard(x)
                changed = True
    return frozenset(u)


# --- normal form ---------------------------------------------------------
#
# Rules, applied to a fixpoint in deterministic scan order (clauses by
# index, body literals by the view's variable order):
#   (a) constants do not occur in a HornView, they are folded away by the
#       substitution helpers in `constructions`
#   (b) a clause whose head also occurs negated is a tautology: drop it
#   (c) an implication clause whose head is implied by its body via the
#       other clauses is redundant: drop it
#   (d) an implication clause whose variable set implies a restraint set
#       can never fire: keep only its restraint part
#   (e) a negated variable implied by the remaining negated variables of a
#       multi-implication or restraint clause is redundant: drop the literal
#
# Only the solution set is promised to be preserved; 500-case equivalence
# checks live in the tests.


def _rule_b(view: HornView, i: int, c: HornClause):
    if c.head is not None and c.head in c.body:
        return _without(view, i)
    return None


def _rule_c(view: HornView, i: int, c: HornClause):
    if c.is_implication:
        others = view.clauses[:i] + view.clauses[i + 1:]
        if c.head in _imp_over(others, c.body):
            return _without(view, i)
    return None


def _rule_d(view: HornView, i: int, c: HornClause):
    if c.is_implication:
        reach = imp(view, c.variables())
        if any(r <= reach for r in view.restraint_sets()):
            return _replace_at(view, i, HornClause(None, c.body, c.origin))
    return None


def _rule_e(view: HornView, i: int, c: HornClause):
    if c.is_multi_implication or c.is_restraint:
        order = {v: j for j, v in enumerate(view.variables)}
        for y in sorted(c.body, key=order.__getitem__):
            if y in imp(view, c.body - {y}):
                return _replace_at(view, i, replace(c, body=c.body - {y}))
    return None


def _without(view: HornView, i: int) -> HornView:
    return HornView(view.variables, view.clauses[:i] + view.clauses[i + 1:])


def _replace_at(view: HornView, i: int, clause: HornClause) -> HornView:
    return HornView(view.variables,
                    view.clauses[:i] + (clause,) + view.clauses[i + 1:])


def normalize(view: HornView) -> HornView:
    """Apply the normal-form rules until none fires."""
    rules = (_rule_b, _rule_c, _rule_d, _rule_e)
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for i, c in enumerate(view.clauses):
                new = rule(view, i, c)
                if new is not None:
                    view = new
                    changed = True
                    break
            if changed:
                break
    return view
